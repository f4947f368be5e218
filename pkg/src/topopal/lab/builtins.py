"""The example models: jewel and tomb, a target-and-wall grid, the two-world
expressivity pair and a three-world version of the interior counterexample."""

from __future__ import annotations

from typing import Callable, Iterable

from ..documents import ModelDocument
from ..model import SubsetModel

JEWEL_TOMB_WORLDS = ["s_JD", "s_JDbar", "s_JbarD", "s_JbarDbar"]


def jewel_tomb_document() -> ModelDocument:
    # Knowledge states: whether the tomb was discovered, and -- only once it
    # has been -- whether the jewel is inside.
    return ModelDocument(
        worlds=list(JEWEL_TOMB_WORLDS),
        family=[
            ("D", ["s_JD", "s_JbarD"]),
            ("Dbar", ["s_JDbar", "s_JbarDbar"]),
            ("JD", ["s_JD"]),
            ("JbarD", ["s_JbarD"]),
        ],
        generate=True,
        valuation={"j": ["s_JD", "s_JDbar"], "d": ["s_JD", "s_JbarD"]},
        meta="Jewel and tomb: j = jewel in the tomb, d = tomb discovered. "
             "The jewel can only be learned about once the tomb is discovered.",
    )


def grid_world(i: int, j: int) -> str:
    return f"x{i}y{j}"


def default_blocked(width: int, height: int) -> set[tuple[int, int]]:
    """Shadow of the wall: a wedge whose far corner is cut diagonally."""
    cut = (width + height) * 2 // 3 + 1
    return {(i, j) for i in range(width) for j in range(height)
            if i >= width // 4 and j >= height // 3 and i + j <= cut}


def target_wall_document(width: int = 12, height: int = 9, cell: int = 3,
                         blocked: Iterable[tuple[int, int]] | None = None) -> ModelDocument:
    """Discretised room: worlds are grid points, knowledge states are the
    axis-aligned rectangles made of ``cell x cell`` measurement blocks.

    With ``cell=1`` every rectangle of points is a knowledge state (the
    discrete topology, feasible only for small grids).
    """
    if width < 1 or height < 1 or cell < 1:
        raise ValueError("grid dimensions and cell size must be positive")
    if width % cell or height % cell:
        raise ValueError(f"cell size {cell} must divide the grid {width}x{height}")
    bw, bh = width // cell, height // cell
    blocked = default_blocked(width, height) if blocked is None else set(blocked)
    for i, j in blocked:
        if not (0 <= i < width and 0 <= j < height):
            raise ValueError(f"blocked point ({i}, {j}) is outside the grid")
    worlds = [grid_world(i, j) for j in range(height) for i in range(width)]
    family = []
    for a in range(bw):
        for b in range(a, bw):
            for c in range(bh):
                for d in range(c, bh):
                    pts = [grid_world(i, j)
                           for j in range(c * cell, (d + 1) * cell)
                           for i in range(a * cell, (b + 1) * cell)]
                    family.append((f"R{a}_{b}x{c}_{d}", pts))
    return ModelDocument(
        worlds=worlds,
        family=family,
        generate=True,
        valuation={"b": [grid_world(i, j) for j in range(height) for i in range(width) if (i, j) in blocked]},
        meta=f"Target and wall on a {width}x{height} grid, measurement blocks of {cell}x{cell}; "
             "b = the wall blocks the target.",
    )


def prop3_x_document() -> ModelDocument:
    return ModelDocument(
        worlds=["x", "y"],
        family=[("EMPTY", []), ("X1", ["x"]), ("Y1", ["y"]), ("XY", ["x", "y"])],
        generate=False,
        valuation={"p": ["x"]},
        meta="Discrete topology on {x, y} with p true at x.",
    )


def prop3_y_document() -> ModelDocument:
    return ModelDocument(
        worlds=["x", "y"],
        family=[("EMPTY", []), ("Y1", ["y"]), ("XY", ["x", "y"])],
        generate=False,
        valuation={"p": ["x"]},
        meta="Topology {{}, {y}, {x, y}} with p true at x; {x} is not open.",
    )


def fig2_document() -> ModelDocument:
    return ModelDocument(
        worlds=["x", "y", "z"],
        family=[("U", ["x"])],
        generate=True,
        valuation={"p": ["x", "y"]},
        meta="Open set U = {x}; p holds on U and at the boundary point y.",
    )


BUILTINS: dict[str, Callable[..., ModelDocument]] = {
    "jewel-tomb": jewel_tomb_document,
    "target-wall": target_wall_document,
    "prop3-X": prop3_x_document,
    "prop3-Y": prop3_y_document,
    "fig2-discrete": fig2_document,
}


def builtin_document(name: str, **params) -> ModelDocument:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown built-in model {name!r}; choose from {', '.join(BUILTINS)}") from None
    return factory(**params)


def builtin_model(name: str, **params) -> SubsetModel:
    """Built-in example model.  ``target-wall`` accepts ``width``, ``height``,
    ``cell`` and ``blocked`` keyword arguments."""
    return builtin_document(name, **params).to_model()
