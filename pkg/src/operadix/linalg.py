"""Exact linear algebra: fields, graded spaces, sparse maps, chain complexes, homology.

Everything is exact: scalars are either integers mod a prime p (canonical
representatives 0..p-1) or fractions.Fraction.  Sparse vectors are dicts
mapping basis identifiers to nonzero scalars; zero coefficients are never
stored.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The ground field: GF(p) for a prime p, or the rationals ('Q')."""

    def __init__(self, spec):
        if spec == "Q":
            self.p = None
        else:
            p = int(spec)
            if not _is_prime(p):
                raise ValueError("field characteristic must be prime, got %r" % (spec,))
            self.p = p

    @property
    def is_rational(self):
        return self.p is None

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(Q)" if self.p is None else "Field(F_%d)" % self.p

    # -- scalar arithmetic on canonical representatives --

    def coerce(self, x):
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        c = a + b
        return c if self.p is None else c % self.p

    def sub(self, a, b):
        c = a - b
        return c if self.p is None else c % self.p

    def mul(self, a, b):
        c = a * b
        return c if self.p is None else c % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        return pow(int(a), self.p - 2, self.p)

    def from_int(self, n):
        return Fraction(n) if self.p is None else n % self.p

    def to_json(self):
        return "Q" if self.p is None else {"p": self.p}


def field_from_json(obj):
    if obj == "Q":
        return Field("Q")
    return Field(obj["p"])


# -- sparse vector helpers (dict id -> scalar, zero-free) --

def vec_add_into(field, acc, vec, coeff=None):
    """acc += coeff * vec, in place; drops zeros."""
    if coeff is None:
        coeff = field.one
    if coeff == 0:
        return acc
    for k, v in vec.items():
        c = field.add(acc.get(k, field.zero), field.mul(coeff, v))
        if c == 0:
            acc.pop(k, None)
        else:
            acc[k] = c
    return acc


def vec_scale(field, vec, coeff):
    if coeff == 0:
        return {}
    return {k: field.mul(coeff, v) for k, v in vec.items()}


def vec_eq(a, b):
    return a == b


class GradedSpace:
    """Finite Z-graded space with an ordered basis in each degree.

    Basis identifiers must be hashable and globally unique within the space.
    """

    def __init__(self, dims):
        self.dims = {int(d): list(ids) for d, ids in dims.items() if ids}
        self.degree_of = {}
        for d, ids in self.dims.items():
            for b in ids:
                if b in self.degree_of:
                    raise ValueError("duplicate basis identifier %r" % (b,))
                self.degree_of[b] = d
        self.index_of = {}
        for d in sorted(self.dims):
            for i, b in enumerate(self.dims[d]):
                self.index_of[b] = i

    def basis(self, degree):
        return self.dims.get(degree, [])

    def degrees(self):
        return sorted(self.dims)

    def dim(self, degree):
        return len(self.dims.get(degree, []))

    def total_dim(self):
        return sum(len(v) for v in self.dims.values())

    def __contains__(self, b):
        return b in self.degree_of

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __repr__(self):
        return "GradedSpace(%s)" % {d: len(v) for d, v in sorted(self.dims.items())}


class Vector:
    """Sparse element of a GradedSpace."""

    def __init__(self, space, coords, field):
        for b in coords:
            if b not in space:
                raise ValueError("unknown basis identifier %r" % (b,))
        self.space = space
        self.field = field
        self.coords = {k: v for k, v in coords.items() if v != 0}

    def degree(self):
        """Degree if homogeneous, else raises."""
        degs = {self.space.degree_of[b] for b in self.coords}
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous: degrees %s" % sorted(degs))
        return degs.pop() if degs else None

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coords == other.coords and self.space == other.space


class LinearMap:
    """Degree-homogeneous sparse linear map between graded spaces.

    Stored column-wise: columns[src_id][tgt_id] = coefficient.  Every entry
    must connect degrees differing exactly by `shift`.
    """

    def __init__(self, source, target, shift, columns, field, check=True):
        self.source = source
        self.target = target
        self.shift = shift
        self.field = field
        self.columns = {}
        for s, col in columns.items():
            col = {t: v for t, v in col.items() if v != 0}
            if not col:
                continue
            if check:
                if s not in source:
                    raise ValueError("unknown source basis id %r" % (s,))
                ds = source.degree_of[s]
                for t in col:
                    if t not in target:
                        raise ValueError("unknown target basis id %r" % (t,))
                    if target.degree_of[t] != ds + shift:
                        raise ValueError(
                            "entry (%r <- %r) violates shift %d" % (t, s, shift))
            self.columns[s] = col

    def column(self, s):
        return self.columns.get(s, {})

    def apply(self, v):
        """Image of a Vector; spaces must match."""
        if v.space is not self.source and v.space != self.source:
            raise ValueError("space mismatch in apply()")
        out = {}
        for s, c in v.coords.items():
            vec_add_into(self.field, out, self.column(s), c)
        return Vector(self.target, out, self.field)

    def apply_coords(self, coords):
        out = {}
        for s, c in coords.items():
            vec_add_into(self.field, out, self.column(s), c)
        return out

    def compose(self, other):
        """self after other (matrix product); other.target must be self.source."""
        if other.target != self.source:
            raise ValueError("space mismatch in compose()")
        cols = {}
        for s, col in other.columns.items():
            acc = {}
            for mid, c in col.items():
                vec_add_into(self.field, acc, self.column(mid), c)
            if acc:
                cols[s] = acc
        return LinearMap(other.source, self.target, self.shift + other.shift,
                         cols, self.field, check=False)

    @staticmethod
    def identity(space, field):
        return LinearMap(space, space, 0,
                         {b: {b: field.one} for b in space.degree_of}, field, check=False)

    @staticmethod
    def zero(source, target, shift, field):
        return LinearMap(source, target, shift, {}, field, check=False)

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.shift == other.shift
                and self.columns == other.columns)


class ChainComplex:
    """Graded space with a degree -1 (pre)differential.

    mode 'dg' asserts d*d = 0 basis-wise at construction; 'pdg' does not.
    """

    def __init__(self, space, d, field, mode="dg"):
        if d.shift != -1:
            raise ValueError("differential must have shift -1")
        self.space = space
        self.d = d
        self.field = field
        self.mode = mode
        if mode == "dg":
            bad = self.d_squared_violations()
            if bad:
                raise ValueError("d^2 != 0 on basis elements: %s" % bad[:5])
        elif mode != "pdg":
            raise ValueError("mode must be 'dg' or 'pdg'")

    def d_squared_violations(self):
        out = []
        for b in sorted(self.space.degree_of, key=repr):
            img = self.d.apply_coords(self.d.column(b))
            if img:
                out.append(b)
        return out


def verify_d_squared(complex_):
    """Report of basis elements where d(d(b)) != 0 (empty list = pass)."""
    return complex_.d_squared_violations()


# -- Gaussian elimination over an exact field --

def row_reduce(columns, field, row_order=None):
    """Reduce a list of sparse columns; returns (rank, pivots, reduced, ops).

    columns: list of dict row_id -> scalar.  Pivot row for each column is the
    first nonzero row in row_order (or sorted-by-repr when omitted);
    deterministic.  `reduced` mirrors `columns` after reduction and `ops[j]`
    expresses reduced[j] as a combination of the input columns.
    """
    pivots = {}   # row_id -> column index
    reduced = []
    ops = []
    if row_order is not None:
        pos = {r: i for i, r in enumerate(row_order)}
        first = lambda col: min(col, key=lambda r: pos[r])
    else:
        first = lambda col: min(col, key=repr)
    for j, col in enumerate(columns):
        cur = {k: v for k, v in col.items() if v != 0}
        op = {j: field.one}
        while cur:
            r = first(cur)
            if r not in pivots:
                c = field.inv(cur[r])
                cur = vec_scale(field, cur, c)
                op = vec_scale(field, op, c)
                pivots[r] = len(reduced)
                break
            k = pivots[r]
            coeff = field.neg(cur[r])
            vec_add_into(field, cur, reduced[k], coeff)
            vec_add_into(field, op, ops[k], coeff)
        reduced.append(cur)
        ops.append(op)
    rank = len(pivots)
    return rank, pivots, reduced, ops


def matrix_rank(columns, field, row_order=None):
    return row_reduce(columns, field, row_order)[0]


def solve_columns(columns, rhs, field, row_order=None):
    """One solution x (coords over column indices) of sum x_j columns[j] = rhs.

    Returns None when the system is inconsistent.  Deterministic.
    """
    _, pivots, reduced, ops = row_reduce(columns, field, row_order)
    if row_order is not None:
        pos = {r: i for i, r in enumerate(row_order)}
        key = lambda r: pos[r]
    else:
        key = repr
    cur = {k: v for k, v in rhs.items() if v != 0}
    coords = {}
    while cur:
        r = min(cur, key=key)
        if r not in pivots:
            return None
        k = pivots[r]
        coeff = cur[r]
        vec_add_into(field, cur, reduced[k], field.neg(coeff))
        vec_add_into(field, coords, ops[k], coeff)
    return coords


def kernel_basis(columns, field, row_order=None):
    """Kernel of the map sending unit column j to columns[j].

    Returns coordinate dicts over column indices, deterministic order.
    """
    _, _, reduced, ops = row_reduce(columns, field, row_order)
    return [ops[j] for j in range(len(columns)) if not reduced[j]]


def homology(complex_, window):
    """Homology of a dg complex over the stored field on a degree window.

    Returns (dims, representatives): dims maps each degree d in `window`
    (an iterable of integers) to dim H_d, representatives maps d to a list of
    cycle Vectors spanning the homology, reduced against the image of d.
    """
    if complex_.mode != "dg":
        raise ValueError("homology requires a dg complex (mode 'dg')")
    field = complex_.field
    space = complex_.space
    dims = {}
    reps = {}
    for deg in sorted(window):
        basis = space.basis(deg)
        cols = [complex_.d.column(b) for b in basis]
        row_order = space.basis(deg - 1)
        # kernel of d_deg
        _, _, reduced, ops = row_reduce(cols, field, row_order)
        ker = [ops[j] for j in range(len(basis)) if not reduced[j]]
        ker_vecs = [{basis[j]: c for j, c in k.items()} for k in ker]
        # image of d_{deg+1}, reduced within degree `deg`
        above = space.basis(deg + 1)
        img_cols = [complex_.d.column(b) for b in above]
        _, img_pivots, img_reduced, _ = row_reduce(img_cols, field, basis)
        # reduce kernel vectors against the image, then pick an independent set
        residues = []
        for v in ker_vecs:
            cur = dict(v)
            for r, k in sorted(img_pivots.items(), key=lambda kv: space.index_of[kv[0]]):
                if r in cur:
                    vec_add_into(field, cur, img_reduced[k], field.neg(cur[r]))
            residues.append(cur)
        rank, pivots, _, _ = row_reduce(residues, field, basis)
        # representatives: the residues that introduced a new pivot
        chosen = [Vector(space, residues[j], field) for j in sorted(set(pivots.values()))]
        dims[deg] = rank
        reps[deg] = chosen
    return dims, reps


def homology_dims(complex_, window):
    return homology(complex_, window)[0]


# -- JSON serialization of the linalg layer --

def space_to_json(space):
    return {str(d): [_id_to_str(b) for b in space.dims[d]] for d in sorted(space.dims)}


def _id_to_str(b):
    if isinstance(b, str):
        return b
    return repr(b)


def complex_to_json(complex_):
    """Schema: {"field": {"p":2}|"Q", "dims": {...}, "d": [[src, tgt, coeff], ...]}."""
    entries = []
    for s in sorted(complex_.d.columns, key=_id_to_str):
        col = complex_.d.columns[s]
        for t in sorted(col, key=_id_to_str):
            entries.append([_id_to_str(s), _id_to_str(t), str(col[t])])
    return {
        "schema": "operadix/complex/1",
        "field": complex_.field.to_json(),
        "dims": space_to_json(complex_.space),
        "d": entries,
        "mode": complex_.mode,
    }


def complex_from_json(obj):
    field = field_from_json(obj["field"])
    space = GradedSpace({int(d): ids for d, ids in obj["dims"].items()})
    cols = {}
    for s, t, c in obj.get("d", []):
        cols.setdefault(s, {})[t] = _scalar_from_str(field, c)
    d = LinearMap(space, space, -1, cols, field)
    return ChainComplex(space, d, field, mode=obj.get("mode", "dg"))


def _scalar_from_str(field, s):
    if field.is_rational:
        return Fraction(s)
    return int(s) % field.p
