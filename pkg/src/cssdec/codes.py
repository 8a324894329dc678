"""CSS code construction, validation, logical operators, and disk bundles.

Builds planar surface codes on an explicit lattice, hypergraph products of
classical parity-check matrices, and reads/writes code bundles (two
MatrixMarket pattern files plus a small manifest).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .gf2 import (
    BitVector,
    SparseBitMatrix,
    _forward_basis,
    _low_bit,
    nullspace_basis,
    rank,
)

__all__ = [
    "CssCode",
    "SurfaceLattice",
    "LogicalBasis",
    "ValidationError",
    "BundleFormatError",
    "validate",
    "surface_code",
    "hgp",
    "logical_basis",
    "save",
    "load",
    "example_hgp",
]


class ValidationError(Exception):
    """CSS structure violation: anticommuting check pair or wrong k."""

    def __init__(self, message: str, row_x: int | None = None, row_z: int | None = None):
        super().__init__(message)
        self.row_x = row_x
        self.row_z = row_z


class BundleFormatError(ValueError):
    """Malformed bundle file; carries file name and line number."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass
class SurfaceLattice:
    """Planar lattice with qubits on edges, vertex checks, and face checks.

    Horizontal edges form a d x d grid; vertical edges a (d-1) x (d-1) grid.
    Horizontal edges in the top and bottom rows touch a single face, and
    those in the leftmost and rightmost columns hang off a single vertex.
    """

    distance: int
    num_vertices: int
    num_edges: int
    num_faces: int
    edge_endpoints: list[tuple[int | None, int | None]]
    face_edges: list[list[int]]
    edge_faces: list[list[int]]
    _side_cells: dict = field(default_factory=dict, repr=False, compare=False)


@dataclass
class LogicalBasis:
    x_logicals: list[BitVector]
    z_logicals: list[BitVector]


@dataclass
class CssCode:
    """A CSS code given by its X- and Z-type check matrices.

    Derived elimination structures used by outcome classification are cached
    lazily; treat instances as immutable after construction.
    """

    name: str
    hx: SparseBitMatrix
    hz: SparseBitMatrix
    n: int
    k: int
    lattice: SurfaceLattice | None = None
    _stab_basis: dict = field(default_factory=dict, repr=False, compare=False)

    def stab_matrix(self, side: str) -> SparseBitMatrix:
        """Stabilizer matrix of the same type as a side's errors (hx for X)."""
        _check_side(side)
        return self.hx if side == "x" else self.hz

    def check_matrix(self, side: str) -> SparseBitMatrix:
        """Matrix whose syndrome detects a side's errors (hz for X errors)."""
        _check_side(side)
        return self.hz if side == "x" else self.hx

    def stab_row_basis(self, side: str) -> dict[int, int]:
        basis = self._stab_basis.get(side)
        if basis is None:
            basis = _forward_basis(self.stab_matrix(side).row_masks())
            self._stab_basis[side] = basis
        return basis


def _check_side(side: str) -> None:
    if side not in ("x", "z"):
        raise ValueError(f"side must be 'x' or 'z', got {side!r}")


def validate(code: CssCode) -> None:
    """Raise ValidationError unless hx hz^T = 0 and k = n - rk(hx) - rk(hz)."""
    if code.hx.num_cols != code.n or code.hz.num_cols != code.n:
        raise ValidationError(
            f"check matrices have {code.hx.num_cols}/{code.hz.num_cols} columns, expected n={code.n}"
        )
    x_masks = code.hx.row_masks()
    z_masks = code.hz.row_masks()
    for i, xm in enumerate(x_masks):
        for j, zm in enumerate(z_masks):
            if (xm & zm).bit_count() & 1:
                raise ValidationError(
                    f"X check {i} and Z check {j} overlap on an odd number of qubits",
                    row_x=i,
                    row_z=j,
                )
    k = code.n - rank(code.hx) - rank(code.hz)
    if k != code.k:
        raise ValidationError(f"stored k={code.k} but n - rk(hx) - rk(hz) = {k}")


def surface_code(d: int) -> CssCode:
    """Distance-d planar surface code: n = d^2 + (d-1)^2, k = 1.

    Qubit indexing: horizontal edge (row i, col j) -> i*d + j; vertical edge
    (a, b) -> d*d + a*(d-1) + b. Vertex check (i, b) -> i*(d-1) + b connects
    the two horizontal edges beside it and the vertical edges above/below;
    face check (a, j) -> a*d + j bounds two horizontal and up to two vertical
    edges. This matches hgp(H_rep, H_rep) for the [d,1,d] repetition code.
    """
    if d < 2:
        raise ValueError("surface code needs distance >= 2")
    n = d * d + (d - 1) * (d - 1)

    def h_edge(i: int, j: int) -> int:
        return i * d + j

    def v_edge(a: int, b: int) -> int:
        return d * d + a * (d - 1) + b

    num_checks = d * (d - 1)
    z_rows: list[list[int]] = []
    for i in range(d):
        for b in range(d - 1):
            star = [h_edge(i, b), h_edge(i, b + 1)]
            for a in (i - 1, i):
                if 0 <= a <= d - 2:
                    star.append(v_edge(a, b))
            z_rows.append(sorted(star))
    x_rows: list[list[int]] = []
    for a in range(d - 1):
        for j in range(d):
            boundary = [h_edge(a, j), h_edge(a + 1, j)]
            for b in (j - 1, j):
                if 0 <= b <= d - 2:
                    boundary.append(v_edge(a, b))
            x_rows.append(sorted(boundary))

    edge_endpoints: list[tuple[int | None, int | None]] = [(None, None)] * n
    edge_faces: list[list[int]] = [[] for _ in range(n)]
    for i in range(d):
        for j in range(d):
            e = h_edge(i, j)
            vs = [i * (d - 1) + b for b in (j - 1, j) if 0 <= b <= d - 2]
            edge_endpoints[e] = (vs[0], vs[1]) if len(vs) == 2 else (vs[0], None)
            edge_faces[e] = [a * d + j for a in (i - 1, i) if 0 <= a <= d - 2]
    for a in range(d - 1):
        for b in range(d - 1):
            e = v_edge(a, b)
            edge_endpoints[e] = (a * (d - 1) + b, (a + 1) * (d - 1) + b)
            edge_faces[e] = [a * d + b, a * d + b + 1]
    face_edges = [sorted(sup) for sup in x_rows]

    lattice = SurfaceLattice(
        distance=d,
        num_vertices=num_checks,
        num_edges=n,
        num_faces=num_checks,
        edge_endpoints=edge_endpoints,
        face_edges=face_edges,
        edge_faces=edge_faces,
    )
    code = CssCode(
        name=f"surface_d{d}",
        hx=SparseBitMatrix(num_checks, n, x_rows),
        hz=SparseBitMatrix(num_checks, n, z_rows),
        n=n,
        k=1,
        lattice=lattice,
    )
    validate(code)
    return code


def hgp(h1: SparseBitMatrix, h2: SparseBitMatrix, name: str = "hgp") -> CssCode:
    """Hypergraph product of two classical parity-check matrices.

    hx = [H1 (x) I_n2 | I_m1 (x) H2^T], hz = [I_n1 (x) H2 | H1^T (x) I_m2],
    with row-major Kronecker indexing: pair (i, j) maps to i*cols2 + j and
    the left qubit block comes first.
    """
    m1, n1 = h1.num_rows, h1.num_cols
    m2, n2 = h2.num_rows, h2.num_cols
    if 0 in (m1, n1, m2, n2):
        raise ValueError("hypergraph product requires nonzero dimensions")
    n = n1 * n2 + m1 * m2

    h2_cols = h2.column_supports()
    x_rows: list[list[int]] = []
    for a in range(m1):
        row_a = h1.rows[a]
        for j in range(n2):
            sup = [i * n2 + j for i in row_a]
            sup += [n1 * n2 + a * m2 + b for b in h2_cols[j]]
            x_rows.append(sorted(sup))
    z_rows: list[list[int]] = []
    h1_cols = h1.column_supports()
    for i in range(n1):
        for b in range(m2):
            sup = [i * n2 + j for j in h2.rows[b]]
            sup += [n1 * n2 + a * m2 + b for a in h1_cols[i]]
            z_rows.append(sorted(sup))

    hx = SparseBitMatrix(m1 * n2, n, x_rows)
    hz = SparseBitMatrix(n1 * m2, n, z_rows)
    k = n - rank(hx) - rank(hz)
    code = CssCode(name=name, hx=hx, hz=hz, n=n, k=k)
    validate(code)
    return code


def logical_basis(code: CssCode) -> LogicalBasis:
    """k independent X logicals (ker hz mod rowspace hx) and Z logicals.

    Kernel vectors are taken in the deterministic order produced by
    nullspace_basis and kept whenever they enlarge the stabilizer row space.
    """
    validate(code)
    x_logicals = _kernel_mod_rows(code.hz, code.hx)
    z_logicals = _kernel_mod_rows(code.hx, code.hz)
    if len(x_logicals) != code.k or len(z_logicals) != code.k:
        raise ValidationError("logical operator count does not match k")
    return LogicalBasis(x_logicals=x_logicals, z_logicals=z_logicals)


def _kernel_mod_rows(h_kernel: SparseBitMatrix, h_rows: SparseBitMatrix) -> list[BitVector]:
    basis = dict(_forward_basis(h_rows.row_masks()))
    out: list[BitVector] = []
    for vec in nullspace_basis(h_kernel):
        bits = vec.bits
        while bits:
            p = _low_bit(bits)
            row = basis.get(p)
            if row is None:
                basis[p] = bits
                out.append(vec)
                break
            bits ^= row
    return out


MTX_HEADER = "%%MatrixMarket matrix coordinate pattern general"


def _write_mtx(m: SparseBitMatrix, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(MTX_HEADER + "\n")
        nnz = sum(len(r) for r in m.rows)
        fh.write(f"{m.num_rows} {m.num_cols} {nnz}\n")
        for i, sup in enumerate(m.rows):
            for j in sup:
                fh.write(f"{i + 1} {j + 1}\n")


def _read_mtx(path: str) -> SparseBitMatrix:
    with open(path) as fh:
        lines = fh.readlines()
    if not lines or not lines[0].strip().startswith("%%MatrixMarket"):
        raise BundleFormatError(path, 1, "missing MatrixMarket header")
    header = lines[0].strip().lower().split()
    if "coordinate" not in header or "pattern" not in header:
        raise BundleFormatError(path, 1, "expected coordinate pattern format")
    idx = 1
    while idx < len(lines) and lines[idx].lstrip().startswith("%"):
        idx += 1
    if idx >= len(lines):
        raise BundleFormatError(path, idx, "missing size line")
    parts = lines[idx].split()
    if len(parts) != 3:
        raise BundleFormatError(path, idx + 1, "size line must be 'rows cols nnz'")
    try:
        nr, nc, nnz = (int(p) for p in parts)
    except ValueError as exc:
        raise BundleFormatError(path, idx + 1, f"bad size line: {exc}") from None
    rows: list[list[int]] = [[] for _ in range(nr)]
    count = 0
    for ln in range(idx + 1, len(lines)):
        stripped = lines[ln].strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise BundleFormatError(path, ln + 1, "entry line must be 'row col'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise BundleFormatError(path, ln + 1, f"bad entry: {exc}") from None
        if not (1 <= i <= nr and 1 <= j <= nc):
            raise BundleFormatError(path, ln + 1, f"entry ({i},{j}) outside {nr}x{nc}")
        rows[i - 1].append(j - 1)
        count += 1
    if count != nnz:
        raise BundleFormatError(path, len(lines), f"declared {nnz} entries, found {count}")
    try:
        return SparseBitMatrix(nr, nc, rows)
    except ValueError as exc:
        raise BundleFormatError(path, 0, str(exc)) from None


def save(code: CssCode, path: str) -> None:
    """Write a code bundle: hx.mtx, hz.mtx, and a manifest."""
    os.makedirs(path, exist_ok=True)
    _write_mtx(code.hx, os.path.join(path, "hx.mtx"))
    _write_mtx(code.hz, os.path.join(path, "hz.mtx"))
    with open(os.path.join(path, "manifest"), "w") as fh:
        fh.write(f"name={code.name}\n")
        fh.write(f"n={code.n}\n")
        fh.write(f"k={code.k}\n")
        if code.lattice is not None:
            fh.write(f"lattice=surface:{code.lattice.distance}\n")


def load(path: str) -> CssCode:
    """Read a code bundle and validate it."""
    manifest_path = os.path.join(path, "manifest")
    fields: dict[str, str] = {}
    with open(manifest_path) as fh:
        for ln, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise BundleFormatError(manifest_path, ln, "expected key=value")
            key, value = stripped.split("=", 1)
            fields[key.strip()] = value.strip()
    for key in ("name", "n", "k"):
        if key not in fields:
            raise BundleFormatError(manifest_path, 0, f"missing '{key}' entry")
    try:
        n = int(fields["n"])
        k = int(fields["k"])
    except ValueError as exc:
        raise BundleFormatError(manifest_path, 0, str(exc)) from None
    hx = _read_mtx(os.path.join(path, "hx.mtx"))
    hz = _read_mtx(os.path.join(path, "hz.mtx"))
    if hx.num_cols != n:
        raise BundleFormatError(
            os.path.join(path, "hx.mtx"), 0, f"has {hx.num_cols} columns, manifest says n={n}"
        )
    if hz.num_cols != n:
        raise BundleFormatError(
            os.path.join(path, "hz.mtx"), 0, f"has {hz.num_cols} columns, manifest says n={n}"
        )
    lattice = None
    if "lattice" in fields:
        spec = fields["lattice"]
        if not spec.startswith("surface:"):
            raise BundleFormatError(manifest_path, 0, f"unknown lattice spec {spec!r}")
        reference = surface_code(int(spec.split(":", 1)[1]))
        if reference.hx != hx or reference.hz != hz:
            raise BundleFormatError(
                manifest_path, 0, f"matrices do not match the {spec} lattice"
            )
        lattice = reference.lattice
    code = CssCode(name=fields["name"], hx=hx, hz=hz, n=n, k=k, lattice=lattice)
    validate(code)
    return code


# Two fixed row-weight-3 parity checks; their product is the stock HGP
# instance used by the simulation examples and tests: n = 52, k = 4.
_EXAMPLE_H1 = [[0, 1, 3], [3, 4, 5], [1, 2, 3], [0, 3, 4]]
_EXAMPLE_H2 = [[0, 1, 2], [0, 2, 5], [0, 1, 5], [2, 3, 4]]


def example_hgp() -> CssCode:
    """The small hypergraph-product code shipped with the package."""
    h1 = SparseBitMatrix(4, 6, _EXAMPLE_H1)
    h2 = SparseBitMatrix(4, 6, _EXAMPLE_H2)
    return hgp(h1, h2, name="hgp_4x6_example")
