"""Complex preimage trees of ``x -> 1/(x-1)^2`` and numeric root-of-unity work.

The tree below a basepoint ``t0`` carries, at each vertex ``a`` with value
``v``, the two preimages ``1 + 1/sqrt(v)`` (first child) and ``1 - 1/sqrt(v)``
(second child), with the principal square root throughout.  A non-real
basepoint keeps every intermediate value away from the branch cut and from
the postcritical points 0 and 1, which is validated at build time.

Products of the vertex offsets ``value - 1`` realize primitive ``2^m``-th
roots of unity; permuting vertices by a tree automorphism then realizes the
Galois action on those roots numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .treeauto import LevelAutomorphism, Vertex, leaf_index

#: residual bound for the exact algebraic identities checked in floating point
IDENTITY_TOL = 1e-9
#: looser bound for the root-of-unity assertions (nested radicals lose digits)
ROOT_TOL = 1e-6
#: basepoints closer than this to 0 or 1 are rejected outright
BASEPOINT_GUARD = 1e-3
#: tree values closer than this to the postcritical set abort the build
POSTCRITICAL_GUARD = 1e-6

DEFAULT_BASEPOINT = 2 + 1j
MAX_DEPTH = 9
MAX_ROOT_EXPONENT = 4  # primitive roots up to order 2**4


class NumericToleranceError(ArithmeticError):
    """A numeric identity missed its tolerance (branch or precision failure)."""


@dataclass(frozen=True)
class PreimageTree:
    """Vertex values per level; ``levels[k][ordinal]`` with the little-endian
    vertex numbering of :func:`monotree.treeauto.leaf_index`."""

    basepoint: complex
    depth: int
    levels: tuple[np.ndarray, ...]

    def value(self, vertex: Vertex) -> complex:
        if len(vertex) > self.depth:
            raise ValueError(f"vertex {vertex!r} below depth {self.depth}")
        return complex(self.levels[len(vertex)][leaf_index(vertex) - 1])


def build_tree(t0: complex, depth: int) -> PreimageTree:
    """Populate all ``2^(depth+1) - 2`` non-root values below ``t0``.

    Rejects basepoints in the guard band around 0 and 1, nonfinite values,
    and any vertex value that drifts into the postcritical guard; verifies
    that applying the map to each child reproduces its parent to relative
    ``1e-9``.
    """
    t0 = complex(t0)
    if depth < 1 or depth > MAX_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_DEPTH}")
    if abs(t0) < BASEPOINT_GUARD or abs(t0 - 1) < BASEPOINT_GUARD:
        raise ValueError("basepoint too close to the postcritical points 0, 1")
    levels = [np.array([t0], dtype=np.complex128)]
    for _ in range(depth):
        parents = levels[-1]
        offsets = 1.0 / np.sqrt(parents)
        children = np.concatenate([1.0 + offsets, 1.0 - offsets])
        if not np.isfinite(children).all():
            raise ValueError("nonfinite value in the preimage tree")
        if (np.abs(children) < POSTCRITICAL_GUARD).any() or (
                np.abs(children - 1) < POSTCRITICAL_GUARD).any():
            raise ValueError("tree value inside the postcritical guard band")
        back = 1.0 / (children - 1.0) ** 2
        tiled = np.concatenate([parents, parents])
        if (np.abs(back - tiled) > IDENTITY_TOL * np.abs(tiled)).any():
            raise NumericToleranceError("child failed to map back onto its parent")
        levels.append(children)
    return PreimageTree(t0, depth, tuple(levels))


def _rel_residual(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = np.maximum(np.abs(expected), 1e-300)
    return float((np.abs(actual - expected) / scale).max())


def child_product_residual(tree: PreimageTree) -> float:
    """Max relative residual of ``child1 * child2 = (v - 1) / v`` over all
    internal vertices."""
    worst = 0.0
    for k in range(tree.depth):
        parents = tree.levels[k]
        half = parents.size
        children = tree.levels[k + 1]
        prod = children[:half] * children[half:]
        worst = max(worst, _rel_residual(prod, (parents - 1) / parents))
    return worst


def grandchild_square_residual(tree: PreimageTree) -> float:
    """Max relative residual of ``[(v11 - 1)(v21 - 1)]^2 = v / (v - 1)``.

    The left-hand side uses the first child of each child; the statement is
    the reciprocal of the child-product identity.
    """
    worst = 0.0
    for k in range(tree.depth - 1):
        parents = tree.levels[k]
        half = parents.size
        grand = tree.levels[k + 2]
        # the first child of any vertex keeps the vertex ordinal
        c11 = grand[:half]
        c21 = grand[half : 2 * half]
        lhs = ((c11 - 1) * (c21 - 1)) ** 2
        worst = max(worst, _rel_residual(lhs, parents / (parents - 1)))
    return worst


def triple_product_residual(tree: PreimageTree) -> float:
    """Max relative residual of ``v - 1 = [ (v1-1)(v11-1)(v21-1) ]^-2`` over
    vertices with two levels below them."""
    worst = 0.0
    for k in range(tree.depth - 1):
        parents = tree.levels[k]
        half = parents.size
        children = tree.levels[k + 1]
        grand = tree.levels[k + 2]
        c1 = children[:half]
        c11 = grand[:half]
        c21 = grand[half : 2 * half]
        lhs = 1.0 / ((c1 - 1) * (c11 - 1) * (c21 - 1)) ** 2
        worst = max(worst, _rel_residual(lhs, parents - 1))
    return worst


# -- root-of-unity expressions ---------------------------------------------------


@dataclass(frozen=True)
class ZetaExpression:
    """Formal product ``prod (value(vertex) - 1)^exponent`` evaluating to a
    primitive ``2^order_exponent``-th root of unity."""

    order_exponent: int
    terms: tuple[tuple[Vertex, int], ...]

    def max_level(self) -> int:
        return max(len(v) for v, _ in self.terms)


def zeta_expression(m: int) -> ZetaExpression:
    """Expression for a primitive ``2^m``-th root, ``m >= 2``.

    The base case multiplies the six offsets of the marked level <=3 vertices;
    each further step replaces every factor ``(b - 1)^e`` by the three deeper
    factors ``[(b1 - 1)(b11 - 1)(b21 - 1)]^-e``, taking one square root per
    step.  Term count triples and the deepest level grows by two per step.
    """
    if m < 2:
        raise ValueError("expressions start at the fourth roots of unity")
    if m > MAX_ROOT_EXPONENT:
        raise ValueError(f"double precision supports exponents up to {MAX_ROOT_EXPONENT}")
    terms: list[tuple[Vertex, int]] = [
        ((1, 1), 1), ((2, 1), -1),
        ((1, 1, 1), 1), ((2, 1, 1), -1),
        ((1, 2, 1), 1), ((2, 2, 1), -1),
    ]
    for _ in range(m - 2):
        nxt: list[tuple[Vertex, int]] = []
        for vertex, exp in terms:
            nxt.append(((*vertex, 1), -exp))
            nxt.append(((*vertex, 1, 1), -exp))
            nxt.append(((*vertex, 2, 1), -exp))
        terms = nxt
    return ZetaExpression(m, tuple(terms))


def _evaluate_terms(tree: PreimageTree, terms, image=None) -> complex:
    z = 1 + 0j
    for vertex, exp in terms:
        v = tree.value(vertex if image is None else image(vertex))
        z *= (v - 1) ** exp
    return z


def eval_zeta(tree: PreimageTree, expr: ZetaExpression) -> complex:
    """Value of the expression; asserts it is primitive of the exact order
    (``z^(2^(m-1)) = -1`` within tolerance)."""
    if tree.depth < expr.max_level():
        raise ValueError("tree too shallow for the expression")
    z = _evaluate_terms(tree, expr.terms)
    if abs(z ** (1 << (expr.order_exponent - 1)) + 1) > ROOT_TOL:
        raise NumericToleranceError(
            "expression did not evaluate to a primitive root of the exact order"
        )
    return z


def act_numeric(w: LevelAutomorphism, expr: ZetaExpression,
                tree: PreimageTree) -> int:
    """Exponent ``k`` with ``w(z) = z^k`` for the root built by ``expr``.

    The automorphism permutes the factor vertices; the resulting product is
    matched against the odd powers of ``z``.  Raises when no power lands
    within tolerance (a branch or precision failure).
    """
    if w.depth < expr.max_level():
        raise ValueError("automorphism too shallow for the expression")
    if tree.depth < expr.max_level():
        raise ValueError("tree too shallow for the expression")
    z = eval_zeta(tree, expr)
    moved = _evaluate_terms(tree, expr.terms, image=w.apply)
    order = 1 << expr.order_exponent
    best_k, best_err = None, float("inf")
    power = z  # z^k for odd k, stepping by z^2
    z_sq = z * z
    for k in range(1, order, 2):
        err = abs(moved - power)
        if err < best_err:
            best_k, best_err = k, err
        power *= z_sq
    if best_err > ROOT_TOL:
        raise NumericToleranceError(
            f"moved product is no odd power of the root (best error {best_err:.3g})"
        )
    return best_k
