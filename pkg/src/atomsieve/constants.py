"""Physical constants and unit conversions.

All internal computation uses Hartree atomic units
(hbar = m_e = e = 4*pi*eps0 = 1); SI appears only at I/O boundaries.
"""

import math

# CODATA 2018 anchors (SI)
BOHR_M = 5.29177210903e-11          # Bohr radius, m
HARTREE_J = 4.3597447222071e-18     # Hartree energy, J
ELECTRON_MASS_KG = 9.1093837015e-31  # kg
PLANCK_J_S = 6.62607015e-34          # Planck constant, J s
ELEMENTARY_CHARGE_C = 1.602176634e-19  # C

# Derived atomic-unit scales (SI value of one atomic unit)
HBAR_J_S = PLANCK_J_S / (2.0 * math.pi)
TIME_AU_S = HBAR_J_S / HARTREE_J                  # a.u. of time, s
VELOCITY_AU_M_S = BOHR_M * HARTREE_J / HBAR_J_S   # a.u. of velocity, m/s

# Helium-4 atom, in electron masses
HELIUM_MASS_AU = 7294.300

ANGSTROM_M = 1.0e-10
ANGSTROM_BOHR = ANGSTROM_M / BOHR_M
BOHR_ANGSTROM = 1.0 / ANGSTROM_BOHR

# unit name -> (quantity kind, SI value of one unit)
_UNIT_TABLE = {
    # length
    "bohr": ("length", BOHR_M),
    "angstrom": ("length", ANGSTROM_M),
    "nm": ("length", 1.0e-9),
    "m": ("length", 1.0),
    # energy
    "hartree": ("energy", HARTREE_J),
    "ev": ("energy", ELEMENTARY_CHARGE_C),
    "j": ("energy", 1.0),
    # dispersion coefficient
    "hartree_bohr6": ("c6", HARTREE_J * BOHR_M**6),
    "j_m6": ("c6", 1.0),
    # polarisability volume (alpha / 4 pi eps0)
    "bohr3": ("polarisability", BOHR_M**3),
    "angstrom3": ("polarisability", ANGSTROM_M**3),
    "m3": ("polarisability", 1.0),
    # velocity
    "au_velocity": ("velocity", VELOCITY_AU_M_S),
    "m_s": ("velocity", 1.0),
    # charge
    "e": ("charge", ELEMENTARY_CHARGE_C),
    "c": ("charge", 1.0),
}


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Convert ``value`` between two units of the same quantity kind.

    Unit names are case-insensitive; see ``_UNIT_TABLE`` for the supported
    set.  Raises ``ValueError`` for unknown units or mismatched kinds.
    """
    try:
        kind_a, scale_a = _UNIT_TABLE[from_unit.lower()]
        kind_b, scale_b = _UNIT_TABLE[to_unit.lower()]
    except KeyError as exc:
        raise ValueError(f"unknown unit {exc.args[0]!r}") from None
    if kind_a != kind_b:
        raise ValueError(
            f"cannot convert {from_unit!r} ({kind_a}) to {to_unit!r} ({kind_b})"
        )
    return value * (scale_a / scale_b)


def de_broglie_wavelength(mass_kg: float, velocity_m_s: float) -> float:
    """de Broglie wavelength h/(m v) in metres for SI inputs."""
    if mass_kg <= 0.0 or velocity_m_s <= 0.0:
        raise ValueError("mass and velocity must be positive")
    return PLANCK_J_S / (mass_kg * velocity_m_s)


def de_broglie_wavelength_au(mass_au: float, velocity_au: float) -> float:
    """de Broglie wavelength 2*pi/(m v) in Bohr for atomic-unit inputs."""
    if mass_au <= 0.0 or velocity_au <= 0.0:
        raise ValueError("mass and velocity must be positive")
    return 2.0 * math.pi / (mass_au * velocity_au)


def velocity_to_au(v_m_s: float) -> float:
    return v_m_s / VELOCITY_AU_M_S


def helium_mass_kg() -> float:
    return HELIUM_MASS_AU * ELECTRON_MASS_KG
