"""The group-spec mini-language: parsing, canonical printing and building.

Grammar (whitespace is not allowed inside a spec)::

    spec       = family | perm | matrix | product | semidirect | subgroup ;
    family     = name , { ":" , nat } ;            (* exactly the family's arity *)
    perm       = "perm:" , gens ;
    gens       = cycles , { ";" , cycles } ;
    cycles     = "()" | cycle , { cycle } ;
    cycle      = "(" , nat , { "," , nat } , ")" ;
    matrix     = "matrix:" , nat , ":" , entries , { ";" , entries } ;
    entries    = int , "," , int , "," , int , "," , int ;   (* a,b,c,d of [[a,b],[c,d]] *)
    product    = "product:" , spec , "*" , spec ;
    semidirect = "semidirect:" , spec , ":" , spec , ":" , action ;
    action     = "exp=" , int , { "," , int }
               | "mat=" , mat , { "/" , mat }
               | "auto=" , nat , { "," , nat } ;    (* one group per generator of Q *)
    mat        = row , { ";" , row } ;
    row        = int , { "," , int } ;
    subgroup   = "subgroup:" , spec , ":" , nat , ":" , nat ;
    int        = [ "-" ] , nat ;

``auto=`` lists, for each generator of the acting group in turn, the images of
the normal factor's generators as element ids; the flat list is cut into
consecutive chunks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import (
    FAMILIES,
    direct_product,
    make_family,
    matrix_group_order,
    semidirect_product,
)
from .core import GroupTable, closure_from_matrices, closure_from_permutations, subgroup_table
from .errors import InvalidParams, NotFound, ParseError


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple

    def __str__(self):
        return ":".join([self.name, *map(str, self.params)])


@dataclass(frozen=True)
class Perm:
    gens: tuple  # tuple of tuples of cycles

    def __str__(self):
        def one(cycles):
            if not cycles:
                return "()"
            return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)

        return "perm:" + ";".join(one(g) for g in self.gens)


@dataclass(frozen=True)
class Matrix:
    p: int
    gens: tuple  # tuple of (a, b, c, d)

    def __str__(self):
        return f"matrix:{self.p}:" + ";".join(",".join(map(str, m)) for m in self.gens)


@dataclass(frozen=True)
class Product:
    left: object
    right: object

    def __str__(self):
        return f"product:{self.left}*{self.right}"


@dataclass(frozen=True)
class Semidirect:
    normal: object
    acting: object
    kind: str  # exp | mat | auto
    values: tuple

    def __str__(self):
        if self.kind == "mat":
            body = "/".join(";".join(",".join(map(str, r)) for r in m) for m in self.values)
        else:
            body = ",".join(map(str, self.values))
        return f"semidirect:{self.normal}:{self.acting}:{self.kind}={body}"


@dataclass(frozen=True)
class SubgroupOf:
    parent: object
    order: int
    index: int

    def __str__(self):
        return f"subgroup:{self.parent}:{self.order}:{self.index}"


GroupSpec = Family | Perm | Matrix | Product | Semidirect | SubgroupOf


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def nat(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a non-negative integer")
        return int(self.text[start:self.pos])

    def int_(self) -> int:
        if self.peek("-"):
            self.pos += 1
            return -self.nat()
        return self.nat()

    def int_list(self, sep=",", reader=None) -> tuple:
        reader = reader or self.int_
        out = [reader()]
        while self.peek(sep):
            self.pos += len(sep)
            out.append(reader())
        return tuple(out)

    def spec(self):
        start = self.pos
        name = self.word()
        if name == "perm":
            self.expect(":")
            gens = [self.cycles()]
            while self.peek(";"):
                self.pos += 1
                gens.append(self.cycles())
            return Perm(tuple(gens))
        if name == "matrix":
            self.expect(":")
            p = self.nat()
            self.expect(":")
            gens = []
            while True:
                entry_pos = self.pos
                m = self.int_list()
                if len(m) != 4:
                    self.error("a 2x2 matrix needs 4 entries", entry_pos)
                gens.append(m)
                if not self.peek(";"):
                    break
                self.pos += 1
            return Matrix(p, tuple(gens))
        if name == "product":
            self.expect(":")
            left = self.spec()
            self.expect("*")
            return Product(left, self.spec())
        if name == "semidirect":
            self.expect(":")
            normal = self.spec()
            self.expect(":")
            acting = self.spec()
            self.expect(":")
            kind_pos = self.pos
            kind = self.word()
            self.expect("=")
            if kind in ("exp", "auto"):
                values = self.int_list(reader=self.int_ if kind == "exp" else self.nat)
            elif kind == "mat":
                values = self.int_list("/", reader=lambda: self.int_list(";", reader=self.int_list))
            else:
                self.error(f"unknown action kind {kind!r}", kind_pos)
            return Semidirect(normal, acting, kind, values)
        if name == "subgroup":
            self.expect(":")
            parent = self.spec()
            self.expect(":")
            order = self.nat()
            self.expect(":")
            return SubgroupOf(parent, order, self.nat())
        if name not in FAMILIES:
            self.error(f"unknown family {name!r}", start)
        arity = FAMILIES[name][0]
        params = []
        for _ in range(arity):
            self.expect(":")
            params.append(self.nat())
        return Family(name, tuple(params))

    def cycles(self) -> tuple:
        if self.peek("()"):
            self.pos += 2
            return ()
        if not self.peek("("):
            self.error("expected a cycle")
        out = []
        while self.peek("("):
            self.pos += 1
            out.append(self.int_list(reader=self.nat))
            self.expect(")")
        return tuple(out)


def parse_spec(text: str):
    """Parse a spec string; raises ``ParseError`` with the failing position."""
    p = _Parser(text.strip())
    node = p.spec()
    if p.pos != len(p.text):
        p.error("unexpected trailing text")
    return node


def _as_node(spec):
    return parse_spec(spec) if isinstance(spec, str) else spec


def _perm_degree(gens) -> int:
    return max([x for g in gens for c in g for x in c] + [1])


def build(spec) -> GroupTable:
    """Construct the group a spec describes; constructor errors propagate."""
    node = _as_node(spec)
    if isinstance(node, Family):
        G = make_family(node.name, *node.params)
    elif isinstance(node, Perm):
        text = ["".join("(" + ",".join(map(str, c)) + ")" for c in g) or "()" for g in node.gens]
        G = closure_from_permutations(text, name=str(node))
    elif isinstance(node, Matrix):
        G = closure_from_matrices(node.p, list(node.gens), name=str(node))
    elif isinstance(node, Product):
        G = direct_product(build(node.left), build(node.right))
    elif isinstance(node, Semidirect):
        N, Q = build(node.normal), build(node.acting)
        values = node.values
        if node.kind == "auto":
            k = len(N.gens)
            if k == 0 or len(values) % k:
                raise InvalidParams(f"auto= needs a multiple of {k} images")
            values = [values[i:i + k] for i in range(0, len(values), k)]
        elif node.kind == "mat":
            values = [[list(r) for r in m] for m in values]
        G = semidirect_product(N, Q, list(values), kind=node.kind)
    elif isinstance(node, SubgroupOf):
        from .lattice import subgroup_classes

        P = build(node.parent)
        reps = [c.representative for c in subgroup_classes(P) if c.order == node.order]
        if node.index >= len(reps):
            raise NotFound(f"{P.name} has {len(reps)} subgroup classes of order {node.order}")
        G = subgroup_table(P, reps[node.index], name=str(node))
    else:
        raise InvalidParams(f"not a group spec: {node!r}")
    G.source = str(node)
    return G


_FAMILY_ORDERS = {
    "cyclic": lambda n: n,
    "dihedral": lambda n: n,
    "quaternion": lambda n: n,
    "elementary_abelian": lambda p, k: p**k,
    "symmetric": lambda n: _factorial(n),
    "alternating": lambda n: max(1, _factorial(n) // 2),
    "sl2": lambda q: matrix_group_order("SL2", q),
    "psl2": lambda q: matrix_group_order("PSL2", q),
    "pgl2": lambda q: matrix_group_order("PGL2", q),
    "binary_octahedral": lambda: 48,
    "trivial": lambda: 1,
}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def spec_order(spec) -> int:
    """Order of the described group, building it only for perm/matrix specs."""
    node = _as_node(spec)
    if isinstance(node, Family):
        return _FAMILY_ORDERS[node.name](*node.params)
    if isinstance(node, Product | Semidirect):
        a, b = (node.left, node.right) if isinstance(node, Product) else (node.normal, node.acting)
        return spec_order(a) * spec_order(b)
    if isinstance(node, SubgroupOf):
        return node.order
    return build(node).order


def canonical(text: str) -> str:
    return str(parse_spec(text))


__all__ = [
    "Family", "Perm", "Matrix", "Product", "Semidirect", "SubgroupOf", "GroupSpec",
    "parse_spec", "build", "spec_order", "canonical",
]
