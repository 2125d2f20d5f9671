"""Plain-text problem files.

Sections, introduced by a bracketed header, hold `key = value` lines or
raw content lines; `#` starts a comment.  Example::

    [ring]
    type = poly
    generators = d1 d2 d3
    semantics = diff
    coordinates = x y z

    [matrix]
    d1, d2, d3

    [kernel]
    lengthscale = 1
    variance = 1

    [options]
    noise = 1e-6
    order = degrevlex

    [data]
    0 0 0, 0, 1.5      # point coords, component, value

    [query]
    1 0 0, 2           # point coords, component

Matrix rows are comma-separated operator entries in the text grammar.
"""

from __future__ import annotations

import importlib.resources

from .schemas import KernelSpec, Observation, ProblemSpec, Query, RingSpec


class ProblemFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_SECTIONS = ("ring", "matrix", "kernel", "options", "data", "query")


def _split_sections(text: str) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise ProblemFormatError(f"unknown section [{name}]", lineno)
            current = sections.setdefault(name, [])
        elif current is None:
            raise ProblemFormatError("content before any section header", lineno)
        else:
            current.append((lineno, line))
    return sections


def _keyvals(lines: list[tuple[int, str]], section: str) -> dict[str, str]:
    out = {}
    for lineno, line in lines:
        if "=" not in line:
            raise ProblemFormatError(f"expected key = value in [{section}]", lineno)
        key, _, value = line.partition("=")
        out[key.strip().lower()] = value.strip()
    return out


def _point_line(line: str, lineno: int, want_value: bool):
    parts = [p.strip() for p in line.split(",")]
    expected = 3 if want_value else 2
    if len(parts) != expected:
        kind = "point, component, value" if want_value else "point, component"
        raise ProblemFormatError(f"expected '{kind}'", lineno)
    try:
        point = [float(x) for x in parts[0].split()]
        component = int(parts[1])
        if want_value:
            return point, component, float(parts[2])
        return point, component
    except ValueError as exc:
        raise ProblemFormatError(str(exc), lineno) from None


def parse_problem(text: str) -> ProblemSpec:
    sections = _split_sections(text)
    if "matrix" not in sections or not sections["matrix"]:
        raise ProblemFormatError("missing [matrix] section", 0)

    ring_kv = _keyvals(sections.get("ring", []), "ring")
    ring = RingSpec(
        type=ring_kv.get("type", "poly"),
        generators=ring_kv.get("generators", "").split(),
        semantics=ring_kv.get("semantics", "").split(),
        coordinates=ring_kv.get("coordinates", "").split(),
    )
    if ring.type == "poly" and len(ring.semantics) == 1 and len(ring.generators) > 1:
        ring.semantics = ring.semantics * len(ring.generators)

    matrix = [
        [cell.strip() for cell in line.split(",")] for _, line in sections["matrix"]
    ]

    kernel_kv = _keyvals(sections.get("kernel", []), "kernel")
    kernel = KernelSpec(
        family=kernel_kv.get("family", "se"),
        lengthscale=kernel_kv.get("lengthscale", "1"),
        variance=kernel_kv.get("variance", "1"),
    )

    opts = _keyvals(sections.get("options", []), "options")
    observations = [
        Observation(point=p, component=c, value=v)
        for p, c, v in (
            _point_line(line, lineno, True) for lineno, line in sections.get("data", [])
        )
    ]
    queries = [
        Query(point=p, component=c)
        for p, c in (
            _point_line(line, lineno, False) for lineno, line in sections.get("query", [])
        )
    ]

    jitter = opts.get("jitter", "")
    return ProblemSpec(
        ring=ring,
        matrix=matrix,
        kernel=kernel,
        noise=float(opts.get("noise", 1e-6)),
        jitter=float(jitter) if jitter else None,
        order=opts.get("order", "degrevlex"),
        shift_step=opts.get("shift_step", "1"),
        observations=observations,
        queries=queries,
    )


def problem_to_text(spec: ProblemSpec) -> str:
    """Canonical text form; parse_problem(problem_to_text(s)) == s."""
    lines = ["[ring]", f"type = {spec.ring.type}"]
    if spec.ring.generators:
        lines.append(f"generators = {' '.join(spec.ring.generators)}")
    if spec.ring.semantics:
        lines.append(f"semantics = {' '.join(spec.ring.semantics)}")
    if spec.ring.coordinates:
        lines.append(f"coordinates = {' '.join(spec.ring.coordinates)}")
    lines += ["", "[matrix]"]
    lines += [", ".join(row) for row in spec.matrix]
    lines += [
        "",
        "[kernel]",
        f"family = {spec.kernel.family}",
        f"lengthscale = {spec.kernel.lengthscale}",
        f"variance = {spec.kernel.variance}",
        "",
        "[options]",
        f"noise = {spec.noise!r}",
        f"order = {spec.order}",
        f"shift_step = {spec.shift_step}",
    ]
    if spec.jitter is not None:
        lines.append(f"jitter = {spec.jitter!r}")
    if spec.observations:
        lines += ["", "[data]"]
        for o in spec.observations:
            lines.append(f"{' '.join(repr(x) for x in o.point)}, {o.component}, {o.value!r}")
    if spec.queries:
        lines += ["", "[query]"]
        for q in spec.queries:
            lines.append(f"{' '.join(repr(x) for x in q.point)}, {q.component}")
    return "\n".join(lines) + "\n"


def load_bundled(name: str) -> ProblemSpec:
    """Load one of the example problems shipped with the package."""
    path = importlib.resources.files("lcgp").joinpath("problems", f"{name}.prob")
    return parse_problem(path.read_text())


def bundled_names() -> list[str]:
    root = importlib.resources.files("lcgp").joinpath("problems")
    return sorted(p.name[: -len(".prob")] for p in root.iterdir() if p.name.endswith(".prob"))
