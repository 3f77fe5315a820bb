"""h-BN monolayer geometry: pristine sheets, parametrized holes, ring indices.

Conventions: coordinates in Bohr, membrane in the z=0 plane, charges in
units of |e|.  Models are immutable after construction; every builder is
deterministic (identical inputs give identical atom orderings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from .constants import ANGSTROM_BOHR

# Ideal (unrelaxed) h-BN geometry.  The B-N bond length is the primary
# parameter; the hexagonal lattice constant follows as sqrt(3) * bond.
BOND_LENGTH_BOHR = 0.1446e-9 / 5.29177210903e-11
LATTICE_CONSTANT_BOHR = math.sqrt(3.0) * BOND_LENGTH_BOHR

# Pristine Hirshfeld charges, units of |e|
PRISTINE_CHARGE = {"B": +0.20, "N": -0.20}
# Edge atoms next to a hole carry larger local charges, capped at 0.39 |e|
EDGE_CHARGE_DEFAULT = 0.39

RING_SENTINEL = 2**30

SPECIES = ("B", "N")


@dataclass(frozen=True)
class AtomSite:
    """One membrane atom."""

    position: np.ndarray       # (3,) Bohr
    species: str               # "B" or "N"
    charge: float              # |e|
    hirshfeld_alpha: float     # Bohr^3, pre-screening input polarisability
    ring_index: int            # bond-graph distance from the hole edge


class HoleSpec:
    """Base class for removal masks; subclasses define a signed distance
    (negative inside) used both for membership and boundary tie-breaking."""

    center: np.ndarray

    def signed_distance(self, xy: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, xy: np.ndarray) -> np.ndarray:
        return self.signed_distance(xy) < 0.0


@dataclass(frozen=True)
class CircleHole(HoleSpec):
    radius: float                      # Bohr
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def signed_distance(self, xy):
        d = np.hypot(xy[..., 0] - self.center[0], xy[..., 1] - self.center[1])
        return d - self.radius


@dataclass(frozen=True)
class EllipseHole(HoleSpec):
    semi_major: float                  # Bohr
    semi_minor: float                  # Bohr
    orientation: float = 0.0           # rad, major axis vs +x
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def signed_distance(self, xy):
        dx = xy[..., 0] - self.center[0]
        dy = xy[..., 1] - self.center[1]
        c, s = math.cos(self.orientation), math.sin(self.orientation)
        u = c * dx + s * dy
        v = -s * dx + c * dy
        # level-set value scaled to an approximate distance; exact enough
        # for membership and for deterministic boundary ordering
        f = np.hypot(u / self.semi_major, v / self.semi_minor)
        return (f - 1.0) * min(self.semi_major, self.semi_minor)


@dataclass(frozen=True)
class SnowflakeHole(HoleSpec):
    """Central disk plus six radial arm slots at 60 degree spacing."""

    core_radius: float                 # Bohr
    arm_length: float                  # Bohr, measured from the center
    arm_halfwidth: float               # Bohr
    phase: float = 0.0                 # rad, direction of arm 0
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def signed_distance(self, xy):
        dx = xy[..., 0] - self.center[0]
        dy = xy[..., 1] - self.center[1]
        d_core = np.hypot(dx, dy) - self.core_radius
        d = d_core
        for k in range(6):
            ang = self.phase + k * math.pi / 3.0
            c, s = math.cos(ang), math.sin(ang)
            u = c * dx + s * dy           # along the arm
            v = -s * dx + c * dy          # across the arm
            # slot from the center out to arm_length
            du = np.maximum(u - self.arm_length, -u)
            d_arm = np.maximum(np.abs(v) - self.arm_halfwidth, du)
            d = np.minimum(d, d_arm)
        return d


@dataclass(frozen=True)
class ChargeProfile:
    """Per-ring charge magnitudes (|e|); B positive, N negative."""

    ring_magnitude: dict = field(default_factory=dict)  # ring -> |q|
    bulk_magnitude: float = 0.20

    def magnitude(self, ring: int) -> float:
        return self.ring_magnitude.get(ring, self.bulk_magnitude)


def default_charge_profile(edge_magnitude: float = EDGE_CHARGE_DEFAULT) -> ChargeProfile:
    return ChargeProfile(ring_magnitude={0: edge_magnitude})


@dataclass(frozen=True)
class MembraneModel:
    """Immutable atomistic membrane: positions in Bohr, z = 0."""

    positions: np.ndarray          # (n, 3)
    species: np.ndarray            # (n,) of "B"/"N"
    charges: np.ndarray            # (n,) |e|
    hirshfeld_alpha: np.ndarray    # (n,) Bohr^3
    ring_index: np.ndarray         # (n,) int
    side_length: float             # Bohr, rhombus side
    wedge_angle: float             # rad
    lattice_constant: float        # Bohr
    hole: HoleSpec | None = None

    def __post_init__(self):
        for name in ("positions", "species", "charges", "hirshfeld_alpha", "ring_index"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.species)

    def site(self, i: int) -> AtomSite:
        return AtomSite(
            position=self.positions[i].copy(),
            species=str(self.species[i]),
            charge=float(self.charges[i]),
            hirshfeld_alpha=float(self.hirshfeld_alpha[i]),
            ring_index=int(self.ring_index[i]),
        )

    @property
    def atoms(self) -> list[AtomSite]:
        return [self.site(i) for i in range(len(self))]

    def bond_neighbours(self) -> list[np.ndarray]:
        """Indices of nearest-neighbour (bonded) atoms for every atom."""
        return _neighbour_lists(self.positions)

    def hollow_center(self) -> np.ndarray:
        """In-plane position of the hexagon center nearest the sheet middle."""
        return hollow_site_near(self, self.sheet_centroid())

    def sheet_centroid(self) -> np.ndarray:
        return self.positions[:, :2].mean(axis=0)


def _neighbour_lists(positions: np.ndarray, bond_tol: float = 1.1) -> list[np.ndarray]:
    tree = cKDTree(positions)
    pairs = tree.query_pairs(r=bond_tol * BOND_LENGTH_BOHR, output_type="ndarray")
    out: list[list[int]] = [[] for _ in range(len(positions))]
    for a, b in pairs:
        out[a].append(b)
        out[b].append(a)
    return [np.array(sorted(nb), dtype=int) for nb in out]


def build_pristine(side_length: float,
                   default_alpha: dict | None = None) -> MembraneModel:
    """Tile a 60-degree rhombus of side ``side_length`` (Bohr) with h-BN.

    Atom order is cell-major: for each (j, i) unit cell, the B site then
    the N site.  An n x n rhombus holds exactly 2 n^2 atoms.
    """
    a_l = LATTICE_CONSTANT_BOHR
    if side_length < 2.0 * a_l:
        raise ValueError("side_length must cover at least 2 lattice constants")
    n = int(round(side_length / a_l))

    a1 = np.array([a_l, 0.0])
    a2 = np.array([0.5 * a_l, 0.5 * math.sqrt(3.0) * a_l])
    delta_n = (a1 + a2) / 3.0    # N sublattice offset

    jj, ii = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    cells = ii[..., None] * a1 + jj[..., None] * a2     # (n, n, 2)
    cells = cells.reshape(-1, 2)

    pos2 = np.empty((2 * len(cells), 2))
    pos2[0::2] = cells                 # B
    pos2[1::2] = cells + delta_n       # N
    positions = np.column_stack([pos2, np.zeros(len(pos2))])

    species = np.empty(len(pos2), dtype="U1")
    species[0::2] = "B"
    species[1::2] = "N"

    charges = np.where(species == "B", PRISTINE_CHARGE["B"], PRISTINE_CHARGE["N"])

    alpha_map = default_alpha or {}
    hirshfeld = np.array([alpha_map.get(s, 0.0) for s in species])

    return MembraneModel(
        positions=positions,
        species=species,
        charges=charges.astype(float),
        hirshfeld_alpha=hirshfeld,
        ring_index=np.full(len(pos2), RING_SENTINEL, dtype=int),
        side_length=n * a_l,
        wedge_angle=math.pi / 3.0,
        lattice_constant=a_l,
    )


def hollow_site_near(model: MembraneModel, point_xy: np.ndarray) -> np.ndarray:
    """Hexagon-center (hollow) site of the ideal lattice nearest to a point.

    Hollow sites form a triangular lattice offset by 2*(a1+a2)/3 from the
    B sublattice.
    """
    a_l = model.lattice_constant
    a1 = np.array([a_l, 0.0])
    a2 = np.array([0.5 * a_l, 0.5 * math.sqrt(3.0) * a_l])
    delta_h = 2.0 * (a1 + a2) / 3.0
    # invert the oblique basis for the offset point
    basis = np.column_stack([a1, a2])
    frac = np.linalg.solve(basis, np.asarray(point_xy) - delta_h)
    best, best_d = None, np.inf
    for di in range(-1, 3):
        for dj in range(-1, 3):
            ij = np.floor(frac).astype(int) + np.array([di, dj])
            cand = basis @ ij + delta_h
            d = np.hypot(*(cand - point_xy))
            if d < best_d:
                best, best_d = cand, d
    return best


def carve_hole(model: MembraneModel, spec: HoleSpec,
               charge_profile: ChargeProfile | None = None) -> MembraneModel:
    """Remove the atoms inside ``spec``, keep removal charge-neutral, and
    recompute ring indices by breadth-first traversal from the hole edge.

    An unbalanced geometric mask is shrunk species-by-species: surplus
    atoms nearest the mask boundary are kept instead (tie-break: boundary
    distance, then atom index).  A mask whose balanced removal is empty
    while the raw mask was not raises ``ValueError``.
    """
    if charge_profile is None:
        charge_profile = default_charge_profile()

    sdf = spec.signed_distance(model.positions[:, :2])
    removed = np.flatnonzero(sdf < 0.0)
    if removed.size == 0:
        return replace(model, hole=spec)

    n_b = int(np.count_nonzero(model.species[removed] == "B"))
    n_n = removed.size - n_b
    if n_b != n_n:
        surplus_species = "B" if n_b > n_n else "N"
        excess = abs(n_b - n_n)
        surplus = [i for i in removed if model.species[i] == surplus_species]
        # keep the surplus atoms closest to the boundary
        surplus.sort(key=lambda i: (abs(sdf[i]), i))
        keep_back = set(surplus[:excess])
        removed = np.array([i for i in removed if i not in keep_back], dtype=int)
    if removed.size == 0:
        raise ValueError("mask removes a single species only; cannot balance")

    removed_set = set(removed.tolist())
    kept = np.array([i for i in range(len(model)) if i not in removed_set], dtype=int)

    # edge detection against the pre-carve bond graph
    neighbours = _neighbour_lists(model.positions)
    old_to_new = {int(o): k for k, o in enumerate(kept)}
    ring = np.full(len(kept), RING_SENTINEL, dtype=int)
    frontier = []
    for new_i, old_i in enumerate(kept):
        if any(int(nb) in removed_set for nb in neighbours[old_i]):
            ring[new_i] = 0
            frontier.append(new_i)

    level = 0
    while frontier:
        nxt = []
        for new_i in frontier:
            for nb in neighbours[kept[new_i]]:
                j = old_to_new.get(int(nb))
                if j is not None and ring[j] > level + 1:
                    ring[j] = level + 1
                    nxt.append(j)
        frontier = nxt
        level += 1

    charges = np.empty(len(kept))
    for new_i, old_i in enumerate(kept):
        mag = charge_profile.magnitude(int(ring[new_i]))
        charges[new_i] = mag if model.species[old_i] == "B" else -mag

    return MembraneModel(
        positions=model.positions[kept].copy(),
        species=model.species[kept].copy(),
        charges=charges,
        hirshfeld_alpha=model.hirshfeld_alpha[kept].copy(),
        ring_index=ring,
        side_length=model.side_length,
        wedge_angle=model.wedge_angle,
        lattice_constant=model.lattice_constant,
        hole=spec,
    )


# Built-in hole geometries.  Radii select whole coordination shells around
# a hollow site, so removal is charge-neutral by symmetry.  Sizes quoted
# "across" refer to the vacancy extent (twice the distance from the hole
# center to the nearest remaining atom).
_BUILTIN_PARAMS = {
    "circle6": {"radius": 2.60 * ANGSTROM_BOHR},
    "circle10": {"radius": 4.50 * ANGSTROM_BOHR},
    "ellipse": {"semi_major": 7.20 * ANGSTROM_BOHR,
                "semi_minor": 2.60 * ANGSTROM_BOHR,
                "orientation": 0.0},
    "snowflake": {"core_radius": 2.60 * ANGSTROM_BOHR,
                  "arm_length": 6.60 * ANGSTROM_BOHR,
                  "arm_halfwidth": 1.00 * ANGSTROM_BOHR,
                  "phase": math.pi / 2.0},
}

BUILTIN_HOLES = tuple(_BUILTIN_PARAMS)


def builtin_hole(name: str, center_xy: np.ndarray | None = None) -> HoleSpec:
    """One of the four built-in hole shapes, centred at ``center_xy``.

    With no center given the spec is centred at the origin; use
    ``center_builtin_hole`` to snap it onto a hollow site of a model.
    """
    try:
        params = dict(_BUILTIN_PARAMS[name])
    except KeyError:
        raise ValueError(
            f"unknown hole {name!r}; choose from {', '.join(BUILTIN_HOLES)}"
        ) from None
    center = np.zeros(2) if center_xy is None else np.asarray(center_xy, dtype=float)
    if name.startswith("circle"):
        return CircleHole(center=center, **params)
    if name == "ellipse":
        return EllipseHole(center=center, **params)
    return SnowflakeHole(center=center, **params)


def center_builtin_hole(name: str, model: MembraneModel) -> HoleSpec:
    """Built-in spec positioned on the hollow site nearest the sheet middle."""
    return builtin_hole(name, center_xy=model.hollow_center())


def default_sheet(side_angstrom: float = 46.0,
                  default_alpha: dict | None = None) -> MembraneModel:
    return build_pristine(side_angstrom * ANGSTROM_BOHR, default_alpha=default_alpha)


def make_holed_sheet(name: str, side_angstrom: float = 46.0,
                     charge_profile: ChargeProfile | None = None,
                     default_alpha: dict | None = None) -> MembraneModel:
    """Convenience: pristine sheet + centred built-in hole."""
    sheet = default_sheet(side_angstrom, default_alpha=default_alpha)
    spec = center_builtin_hole(name, sheet)
    return carve_hole(sheet, spec, charge_profile=charge_profile)


# -- geometry text format ----------------------------------------------------
#
# line 1:   count  side_length  wedge_angle  lattice_constant
# per atom: species  x  y  z  charge  alpha_hirsh  ring_index
# (Bohr and |e| throughout; 17 significant digits)

def save_geometry(path, model: MembraneModel) -> None:
    with open(path, "w") as fh:
        fh.write("%d %.17g %.17g %.17g\n" % (
            len(model), model.side_length, model.wedge_angle, model.lattice_constant))
        for i in range(len(model)):
            x, y, z = model.positions[i]
            fh.write("%s %.17g %.17g %.17g %.17g %.17g %d\n" % (
                model.species[i], x, y, z,
                model.charges[i], model.hirshfeld_alpha[i], model.ring_index[i]))


def load_geometry(path) -> MembraneModel:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise ValueError("geometry header must be: count l theta lattice_constant")
        count = int(header[0])
        side, theta, a_l = (float(v) for v in header[1:])
        positions = np.empty((count, 3))
        species = np.empty(count, dtype="U1")
        charges = np.empty(count)
        alphas = np.empty(count)
        rings = np.empty(count, dtype=int)
        for i in range(count):
            parts = fh.readline().split()
            if len(parts) != 7:
                raise ValueError(f"bad geometry row {i}")
            species[i] = parts[0]
            positions[i] = [float(parts[1]), float(parts[2]), float(parts[3])]
            charges[i] = float(parts[4])
            alphas[i] = float(parts[5])
            rings[i] = int(parts[6])
    return MembraneModel(
        positions=positions, species=species, charges=charges,
        hirshfeld_alpha=alphas, ring_index=rings,
        side_length=side, wedge_angle=theta, lattice_constant=a_l,
    )
