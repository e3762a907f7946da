"""The two worked examples, bundled as space documents."""

from __future__ import annotations

from importlib import resources

from tricontract.metric import FiniteMetricSpace, SelfMap, parse_space

EXAMPLES = {"2.1": "ex21.json", "2.2": "ex22.json"}


def example_document(name: str) -> str:
    try:
        filename = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
    return resources.files("tricontract.data").joinpath(filename).read_text(encoding="utf-8")


def load_example(name: str) -> tuple[FiniteMetricSpace, SelfMap]:
    space, selfmap = parse_space(example_document(name))
    return space, selfmap
