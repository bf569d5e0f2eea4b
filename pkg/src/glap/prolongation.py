"""Conformal derivation algebras and full prolongations.

Given a fundamental graded Lie algebra m (negative degrees only) and a
nondegenerate symmetric bilinear form g on its degree -1 part, the degree 0
layer is the algebra of grading-preserving derivations D of m whose
restriction to degree -1 rescales g infinitesimally:

    g(D x, y) + g(x, D y) = eta(D) * g(x, y).

The factor eta(D) is one extra unknown in a joint homogeneous linear
system, solved exactly over the rationals.  Higher layers follow the usual
prolongation recursion: degree k+1 consists of the degree-(k+1) maps
u : m -> (current algebra) satisfying

    u([x, y]) = [u(x), y] + [x, u(y)]      for all x, y in m,

with [u, x] := u(x).  Brackets between nonnegative layers are forced by
requiring ad to act by derivations, and every assembled algebra is
certified afterwards by an exhaustive Jacobi sweep, so a bug in the
incremental bookkeeping cannot survive to the output.

The recursion stops at the first empty layer; for the inputs this package
builds that always happens (the negative part is fundamental and the
derivation algebra of a conformal class is finite), but a runaway input is
cut off after GLAP_STEP_LIMIT steps (default 64).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EtaVanishesOnE,
    GlapError,
    NotFundamental,
    ParseError,
    StepLimitExceeded,
)
from .gla import (
    GradedAlgebra,
    SymBilinearForm,
    _load_json,
    check_fundamental,
    check_gla,
)
from .linalg import Mat, sparse_kernel, Echelon


class _Layout:
    """Column layout for block-structured unknowns.

    Each block is a (rows x cols) matrix of unknowns tagged by a key;
    columns are flattened block by block, column-major inside a block.
    """

    def __init__(self):
        self.blocks: dict[object, tuple[int, int, int]] = {}  # key -> (off, rows, cols)
        self.total = 0

    def add(self, key, rows: int, cols: int):
        self.blocks[key] = (self.total, rows, cols)
        self.total += rows * cols

    def col(self, key, r: int, c: int) -> int:
        off, rows, cols = self.blocks[key]
        assert 0 <= r < rows and 0 <= c < cols
        return off + c * rows + r

    def unflatten(self, key, vec) -> Mat:
        off, rows, cols = self.blocks[key]
        M = Mat.zeros(rows, cols)
        for c in range(cols):
            for r in range(rows):
                M.a[r][c] = vec[off + c * rows + r]
        return M


@dataclass
class Derivation:
    """A grading-preserving derivation of m together with its conformal
    factor eta; ``blocks[p]`` maps the degree p piece to itself."""

    blocks: dict[int, Mat]
    eta: Fraction

    def apply_local(self, p: int, col: int):
        """Image of the col-th basis vector of degree p, as a dense column."""
        return self.blocks[p].col(col) if p in self.blocks else []

    def commutator(self, other: "Derivation") -> "Derivation":
        blocks = {}
        for p, A in self.blocks.items():
            B = other.blocks[p]
            blocks[p] = A * B - B * A
        return Derivation(blocks, Fraction(0))


class DerivationBasis:
    """Canonical basis of the conformal derivation algebra of (m, g)."""

    def __init__(self, m, g, elements, layout, free_cols, eta_col):
        self.m = m
        self.g = g
        self.elements: list[Derivation] = elements
        self._layout = layout
        self._free_cols = free_cols
        self._eta_col = eta_col

    def __len__(self):
        return len(self.elements)

    def _flatten(self, blocks: dict[int, Mat], eta) -> list[Fraction]:
        vec = [Fraction(0)] * (self._layout.total + 1)
        for p, M in blocks.items():
            off, rows, cols = self._layout.blocks[p]
            for c in range(cols):
                for r in range(rows):
                    vec[off + c * rows + r] = M.a[r][c]
        vec[self._eta_col] = Fraction(eta)
        return vec

    def coordinates_of(self, blocks: dict[int, Mat], eta) -> list[Fraction]:
        """Coordinates in this basis; raises if the map is not in the span.

        The basis comes from a reduced echelon kernel, so coordinates can be
        read off at the free columns; the reconstruction check makes the
        membership claim exact rather than assumed.
        """
        vec = self._flatten(blocks, eta)
        coords = [vec[f] for f in self._free_cols]
        recon = [Fraction(0)] * len(vec)
        for t, el in enumerate(self.elements):
            c = coords[t]
            if c == 0:
                continue
            ev = self._flatten(el.blocks, el.eta)
            for idx, val in enumerate(ev):
                recon[idx] += c * val
        if recon != vec:
            raise GlapError("map does not lie in the conformal derivation algebra")
        return coords


def _derivation_rows(A: GradedAlgebra, layout: _Layout, shift: int):
    """Constraint rows of D([x,y]) = [D(x),y] + [x,D(y)] over all pairs of
    negative-degree basis elements, for a degree-``shift`` map D whose
    blocks are indexed by source degree in ``layout``."""
    by_deg = A.by_degree()
    neg = sorted(d for d in by_deg if d < 0)
    local = {
        d: {g: t for t, g in enumerate(by_deg[d])} for d in by_deg
    }
    rows = []
    for p in neg:
        for q in neg:
            if q < p:
                continue
            td = p + q + shift
            tgt = by_deg.get(td, [])
            if not tgt:
                continue
            tpos = local[td]
            for ii, gi in enumerate(by_deg[p]):
                js = by_deg[q]
                start = ii + 1 if p == q else 0
                for jj in range(start, len(js)):
                    gj = js[jj]
                    comp: dict[int, dict[int, Fraction]] = {}

                    def put(t_global, colidx, coeff):
                        if coeff == 0:
                            return
                        row = comp.setdefault(t_global, {})
                        row[colidx] = row.get(colidx, Fraction(0)) + coeff

                    # D([x, y]) over the (p+q)-block, when it exists
                    if (p + q) in layout.blocks:
                        cell = A.bracket_pair(gi, gj)
                        mloc = local[p + q]
                        for mg, c in cell.items():
                            for t_global in tgt:
                                put(
                                    t_global,
                                    layout.col(p + q, tpos[t_global], mloc[mg]),
                                    c,
                                )
                    # -[D(x), y]: D(x) runs over the degree p+shift basis
                    if p in layout.blocks:
                        for r, fr in enumerate(by_deg.get(p + shift, [])):
                            for t_global, c in A.bracket_pair(fr, gj).items():
                                put(t_global, layout.col(p, r, ii), -c)
                    # -[x, D(y)]
                    if q in layout.blocks:
                        for r, fr in enumerate(by_deg.get(q + shift, [])):
                            for t_global, c in A.bracket_pair(gi, fr).items():
                                put(t_global, layout.col(q, r, jj), -c)
                    for t_global, row in comp.items():
                        row = {c: v for c, v in row.items() if v != 0}
                        if row:
                            rows.append(row)
    return rows


def conformal_g0(m: GradedAlgebra, g: SymBilinearForm) -> DerivationBasis:
    """Canonical basis of all grading-preserving derivations of m that are
    conformal with respect to g on the degree -1 part."""
    ok, _ = check_fundamental(m)
    if not ok:
        raise NotFundamental(
            f"{m.name}: the degree -1 part does not generate the algebra"
        )
    minus1 = m.by_degree()[-1]
    if g.indices != minus1:
        raise GlapError(
            f"form indexes {g.indices} but degree -1 basis is {minus1}"
        )
    layout = _Layout()
    by_deg = m.by_degree()
    for p in sorted(by_deg):
        d = len(by_deg[p])
        layout.add(p, d, d)
    eta_col = layout.total

    rows = _derivation_rows(m, layout, 0)
    # conformal condition: sum_r D[r,a] G[r,b] + sum_r G[a,r] D[r,b] = eta G[a,b]
    G = g.matrix
    nm1 = len(minus1)
    for a in range(nm1):
        for b in range(a, nm1):
            row: dict[int, Fraction] = {}
            for r in range(nm1):
                if G.a[r][b] != 0:
                    c = layout.col(-1, r, a)
                    row[c] = row.get(c, Fraction(0)) + G.a[r][b]
                if G.a[a][r] != 0:
                    c = layout.col(-1, r, b)
                    row[c] = row.get(c, Fraction(0)) + G.a[a][r]
            if G.a[a][b] != 0:
                row[eta_col] = row.get(eta_col, Fraction(0)) - G.a[a][b]
            row = {c: v for c, v in row.items() if v != 0}
            if row:
                rows.append(row)

    ech = Echelon(layout.total + 1)
    for row in rows:
        ech.add(row)
    kbasis = ech.kernel()
    free_cols = ech.free_columns()
    elements = []
    for vec in kbasis:
        blocks = {p: layout.unflatten(p, vec) for p in by_deg}
        elements.append(Derivation(blocks, vec[eta_col]))
    basis = DerivationBasis(m, g, elements, layout, free_cols, eta_col)
    # the grading derivation (p * id on degree p, eta = -2) must be in the
    # span; failing that, something above is broken
    basis.coordinates_of(_grading_blocks(m), Fraction(-2))
    return basis


def _grading_blocks(m: GradedAlgebra) -> dict[int, Mat]:
    by_deg = m.by_degree()
    return {p: Fraction(p) * Mat.identity(len(ix)) for p, ix in by_deg.items()}


def grading_derivation(m: GradedAlgebra) -> Derivation:
    """The characteristic derivation: multiplication by p on degree p."""
    return Derivation(_grading_blocks(m), Fraction(-2))


def scaling_split(basis: DerivationBasis) -> tuple[Derivation, list[Derivation]]:
    """Split the conformal derivation algebra as R E + ker(eta).

    E is the characteristic derivation; eta(E) = -2 pins the normalization.
    Returns (E, basis of the eta-kernel).  Raises EtaVanishesOnE when eta
    vanishes identically on the span, which would contradict E lying in it.
    """
    E = grading_derivation(basis.m)
    etas = [el.eta for el in basis.elements]
    if all(e == 0 for e in etas):
        raise EtaVanishesOnE(
            "eta vanishes on the whole derivation algebra; E cannot be inside"
        )
    coords_E = basis.coordinates_of(E.blocks, E.eta)
    eta_E = sum(c * e for c, e in zip(coords_E, etas))
    if eta_E != -2:
        raise EtaVanishesOnE(f"eta(E) = {eta_E}, expected -2")
    combos = sparse_kernel(
        [{t: e for t, e in enumerate(etas) if e != 0}], len(etas)
    )
    hats = []
    for combo in combos:
        blocks: dict[int, Mat] | None = None
        for c, el in zip(combo, basis.elements):
            if c == 0:
                continue
            scaled = {p: c * M for p, M in el.blocks.items()}
            if blocks is None:
                blocks = scaled
            else:
                blocks = {p: blocks[p] + scaled[p] for p in blocks}
        if blocks is None:
            blocks = {p: Mat.zeros(M.m, M.n) for p, M in E.blocks.items()}
        hats.append(Derivation(blocks, Fraction(0)))
    return E, hats


# ---------------------------------------------------------------------------
# assembling the nonnegative part
# ---------------------------------------------------------------------------


def assemble_degree0(m: GradedAlgebra, basis: DerivationBasis) -> GradedAlgebra:
    """m extended by its conformal derivation algebra in degree 0.

    Brackets: [D, x] = D(x) for x in m, and [D, D'] the commutator of maps,
    re-expressed in the canonical derivation basis.
    """
    n = m.n
    t = len(basis)
    labels = list(m.labels) + [f"d0_{i}" for i in range(t)]
    degrees = list(m.degrees) + [0] * t
    brackets = {k: dict(v) for k, v in m.brackets.items()}
    by_deg = m.by_degree()
    glob = {p: ix for p, ix in by_deg.items()}
    for a, el in enumerate(basis.elements):
        col = n + a
        for p, ix in glob.items():
            M = el.blocks[p]
            for c_loc, j in enumerate(ix):
                cell = {}
                for r_loc, gk in enumerate(ix):
                    v = M.a[r_loc][c_loc]
                    if v != 0:
                        cell[gk] = -v  # [x, D] = -D(x)
                if cell:
                    brackets[(j, col)] = cell
    for a in range(t):
        for b in range(a + 1, t):
            comm = basis.elements[a].commutator(basis.elements[b])
            coords = basis.coordinates_of(comm.blocks, comm.eta)
            cell = {n + i: c for i, c in enumerate(coords) if c != 0}
            if cell:
                brackets[(n + a, n + b)] = cell
    return GradedAlgebra(f"prol({m.name})", labels, degrees, brackets)


def prolong_step(A: GradedAlgebra, k: int) -> GradedAlgebra:
    """Extend a partial prolongation (degrees -mu..k) by its degree k+1
    layer; returns A unchanged when the layer is empty.

    Besides the new basis elements and their action brackets [u, x] = u(x),
    all brackets between nonnegative degrees summing to k+1 are computed
    (forced by the derivation property of ad on m) and certified by exact
    re-expression in the new layer's canonical basis.
    """
    by_deg = A.by_degree()
    if max(by_deg) != k:
        raise GlapError(f"expected top degree {k}, found {max(by_deg)}")
    neg = sorted(d for d in by_deg if d < 0)
    mu = -neg[0]
    shift = k + 1
    layout = _Layout()
    for p in neg:
        tgt = by_deg.get(p + shift, [])
        if tgt:
            layout.add(p, len(tgt), len(by_deg[p]))
    rows = _derivation_rows(A, layout, shift)
    ech = Echelon(layout.total)
    for row in rows:
        ech.add(row)
    kern = ech.kernel()
    if not kern:
        return A
    free_cols = ech.free_columns()

    n = A.n
    t = len(kern)
    labels = list(A.labels) + [f"p{shift}_{i}" for i in range(t)]
    degrees = list(A.degrees) + [shift] * t
    brackets = {key: dict(v) for key, v in A.brackets.items()}
    for i, vec in enumerate(kern):
        col = n + i
        for p in neg:
            if p not in layout.blocks:
                continue
            M = layout.unflatten(p, vec)
            tgt = by_deg[p + shift]
            for c_loc, j in enumerate(by_deg[p]):
                cell = {}
                for r_loc, gk in enumerate(tgt):
                    v = M.a[r_loc][c_loc]
                    if v != 0:
                        cell[gk] = -v  # [x, u] = -u(x)
                if cell:
                    brackets[(j, col)] = cell
    A2 = GradedAlgebra(A.name, labels, degrees, brackets)

    # brackets between nonnegative layers summing to k+1, forced by
    # ([w, v])(z) = [w, [v, z]] - [v, [w, z]] for z in m
    by_deg2 = A2.by_degree()
    extra: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(0, shift // 2 + 1):
        b = shift - a
        for w in by_deg2.get(a, []):
            for v in by_deg2.get(b, []):
                if a == b and w >= v:
                    continue
                flat = [Fraction(0)] * layout.total
                for p in neg:
                    if p not in layout.blocks:
                        # the forced map must vanish into this degree; the
                        # final Jacobi sweep certifies that it does
                        continue
                    tpos = {g: r for r, g in enumerate(by_deg[p + shift])}
                    for c_loc, z in enumerate(by_deg[p]):
                        acc: dict[int, Fraction] = {}
                        for mgl, c in A2.bracket_pair(v, z).items():
                            for tg, d in A2.bracket_pair(w, mgl).items():
                                s = acc.get(tg, Fraction(0)) + c * d
                                if s:
                                    acc[tg] = s
                                elif tg in acc:
                                    del acc[tg]
                        for mgl, c in A2.bracket_pair(w, z).items():
                            for tg, d in A2.bracket_pair(v, mgl).items():
                                s = acc.get(tg, Fraction(0)) - c * d
                                if s:
                                    acc[tg] = s
                                elif tg in acc:
                                    del acc[tg]
                        for tg, val in acc.items():
                            flat[layout.col(p, tpos[tg], c_loc)] = val
                coords = [flat[f] for f in free_cols]
                recon = [Fraction(0)] * layout.total
                for i, c in enumerate(coords):
                    if c == 0:
                        continue
                    for idx, val in enumerate(kern[i]):
                        recon[idx] += c * val
                if recon != flat:
                    raise GlapError(
                        f"forced bracket of degrees ({a},{b}) escapes the "
                        f"degree {shift} layer"
                    )
                cell = {n + i: c for i, c in enumerate(coords) if c != 0}
                if cell:
                    extra[(w, v)] = cell
    if extra:
        merged = {key: dict(val) for key, val in A2.brackets.items()}
        merged.update(extra)
        A2 = GradedAlgebra(A2.name, labels, degrees, merged)
    return A2


def transitivity_check(A: GradedAlgebra) -> bool:
    """No nonzero element of a nonnegative layer may kill all of degree -1."""
    by_deg = A.by_degree()
    minus1 = by_deg.get(-1, [])
    for d, ix in by_deg.items():
        if d < 0:
            continue
        dim = len(ix)
        loc = {g: c for c, g in enumerate(ix)}
        ech = Echelon(dim)
        for e in minus1:
            tgt = by_deg.get(d - 1, [])
            tpos = {g: r for r, g in enumerate(tgt)}
            rows: dict[int, dict[int, Fraction]] = {}
            for c_loc, u in enumerate(ix):
                for tg, c in A.bracket_pair(u, e).items():
                    rows.setdefault(tpos[tg], {})[c_loc] = c
            for row in rows.values():
                ech.add(row)
        if ech.rank < dim:
            return False
    return True


@dataclass
class ProlongationResult:
    algebra: GradedAlgebra
    form: SymBilinearForm
    step_dims: dict[int, int]
    mu: int
    nu: int
    complete: bool

    def dims_by_degree(self) -> dict[int, int]:
        return self.algebra.dims_by_degree()

    def total_dim(self) -> int:
        return self.algebra.n

    def to_json_dict(self) -> dict:
        d = self.algebra.to_json_dict()
        d["step_dims"] = {str(k): v for k, v in sorted(self.step_dims.items())}
        d["form"] = self.form.to_json_dict()
        d["complete"] = self.complete
        return d

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)

    @classmethod
    def from_json_dict(cls, d: dict) -> "ProlongationResult":
        algebra = GradedAlgebra.from_json_dict(d)
        for key in ("step_dims", "form", "complete"):
            if key not in d:
                raise ParseError(f"missing key {key!r} in prolongation object")
        try:
            step_dims = {int(k): int(v) for k, v in d["step_dims"].items()}
        except (ValueError, AttributeError) as e:
            raise ParseError(f"bad step_dims: {e}") from e
        form = SymBilinearForm.from_json_dict(d["form"])
        degs = algebra.degrees
        mu = -min(degs)
        nu = max(degs)
        return cls(algebra, form, step_dims, mu, nu, bool(d["complete"]))


def deserialize_prolongation(text: str) -> ProlongationResult:
    return ProlongationResult.from_json_dict(_load_json(text))


def step_limit() -> int:
    raw = os.environ.get("GLAP_STEP_LIMIT", "64")
    try:
        lim = int(raw)
    except ValueError:
        raise GlapError(f"GLAP_STEP_LIMIT={raw!r} is not an integer") from None
    if lim < 1:
        raise GlapError(f"GLAP_STEP_LIMIT={lim} must be at least 1")
    return lim


def full_prolongation(
    m: GradedAlgebra, g: SymBilinearForm, max_degree: int | None = None
) -> ProlongationResult:
    """Iterate prolongation steps until a layer is empty.

    A natural stop certifies the result (exhaustive Jacobi and grading
    check, transitivity, untouched negative part); stopping at max_degree
    instead yields a partial, uncertified algebra with complete=False.
    """
    basis0 = conformal_g0(m, g)
    A = assemble_degree0(m, basis0)
    mu = -min(m.degrees)
    limit = step_limit()
    step_dims: dict[int, int] = {}
    complete = False
    k = 0
    while True:
        if max_degree is not None and k + 1 > max_degree:
            break
        if k + 1 > limit:
            raise StepLimitExceeded(
                f"no termination within {limit} prolongation steps"
            )
        A2 = prolong_step(A, k)
        grew = A2.n - A.n
        step_dims[k + 1] = grew
        A = A2
        if grew == 0:
            complete = True
            break
        k += 1
    if complete:
        if not _same_negative(A, m):
            raise GlapError("prolongation modified the negative part")
        rep = check_gla(A)
        if not (rep["grading_ok"] and rep["jacobi_ok"]):
            raise GlapError(
                f"assembled prolongation failed certification: "
                f"{rep['violation_count']} violations"
            )
        if not transitivity_check(A):
            raise GlapError("assembled prolongation is not transitive")
    nu = max(A.degrees)
    return ProlongationResult(A, g, step_dims, mu, nu, complete)


def _same_negative(A: GradedAlgebra, m: GradedAlgebra) -> bool:
    neg = A.negative_part()
    return (
        neg.labels == m.labels
        and neg.degrees == m.degrees
        and neg.brackets == m.brackets
    )
