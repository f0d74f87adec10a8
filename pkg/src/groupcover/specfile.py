"""Group spec files (.grp): a small line-oriented text format.

Grammar (one directive per line, '#' starts a comment, blank lines ignored):

    name: <identifier>
    degree: <int>
    generators: <cycle word>, <cycle word>, ...
    expected_sigma: <int> | infinity          # optional
    sigma_source: paper | derived             # required iff expected_sigma given
    provenance: <free text>                   # optional
    tags: <tag>, <tag>, ...                   # optional
    maximal_subgroups:                        # optional; followed by '- ' lines
    - <cycle word>, <cycle word>, ...
    - ...

Cycle words are 0-based disjoint cycles like "(0 1 2)(3 4)"; "()" is the
identity. `generators:` may be empty for the trivial group. The parser and
writer round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .group import Group, group_from_generators
from .perm import Perm


class SpecFileError(ValueError):
    pass


@dataclass
class GroupSpec:
    name: str
    degree: int
    generators: list[str]
    expected_sigma: int | float | None = None  # float('inf') allowed
    sigma_source: str | None = None
    provenance: str | None = None
    tags: list[str] = field(default_factory=list)
    maximal_subgroups: list[list[str]] | None = None

    def build(self) -> Group:
        G = group_from_generators(self.degree, self.generators, name=self.name)
        if self.maximal_subgroups is not None:
            G.known_maximal_words = [list(ws) for ws in self.maximal_subgroups]
        return G


def _split_words(text: str) -> list[str]:
    words = [w.strip() for w in text.split(",") if w.strip()]
    return words


def parse_spec_text(text: str, source: str = "<string>") -> GroupSpec:
    name = None
    degree = None
    generators: list[str] | None = None
    expected_sigma: int | float | None = None
    sigma_source = None
    provenance = None
    tags: list[str] = []
    maximals: list[list[str]] | None = None
    in_maximals = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if in_maximals:
            if line.lstrip().startswith("- "):
                words = _split_words(line.lstrip()[2:])
                if not words:
                    raise SpecFileError(f"{source}:{lineno}: empty maximal subgroup entry")
                maximals.append(words)
                continue
            in_maximals = False
        if ":" not in line:
            raise SpecFileError(f"{source}:{lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "name":
            name = value
        elif key == "degree":
            try:
                degree = int(value)
            except ValueError as exc:
                raise SpecFileError(f"{source}:{lineno}: bad degree {value!r}") from exc
        elif key == "generators":
            generators = _split_words(value)
        elif key == "expected_sigma":
            if value.lower() in ("infinity", "inf"):
                expected_sigma = float("inf")
            else:
                try:
                    expected_sigma = int(value)
                except ValueError as exc:
                    raise SpecFileError(f"{source}:{lineno}: bad expected_sigma") from exc
        elif key == "sigma_source":
            if value not in ("paper", "derived"):
                raise SpecFileError(f"{source}:{lineno}: sigma_source must be paper|derived")
            sigma_source = value
        elif key == "provenance":
            provenance = value
        elif key == "tags":
            tags = [t.strip() for t in value.split(",") if t.strip()]
        elif key == "maximal_subgroups":
            maximals = []
            in_maximals = True
        else:
            raise SpecFileError(f"{source}:{lineno}: unknown key {key!r}")
    if name is None or degree is None or generators is None:
        raise SpecFileError(f"{source}: name, degree and generators are required")
    if expected_sigma is not None and sigma_source is None:
        raise SpecFileError(f"{source}: expected_sigma requires sigma_source")
    for w in generators:
        p = Perm.parse(w, degree)  # raises MalformedCycleWord on bad input
        del p
    if maximals is not None:
        for ws in maximals:
            for w in ws:
                Perm.parse(w, degree)
    return GroupSpec(
        name=name,
        degree=degree,
        generators=generators,
        expected_sigma=expected_sigma,
        sigma_source=sigma_source,
        provenance=provenance,
        tags=tags,
        maximal_subgroups=maximals,
    )


def load_spec(path: str | Path) -> GroupSpec:
    path = Path(path)
    return parse_spec_text(path.read_text(), source=str(path))


def format_spec(spec: GroupSpec) -> str:
    lines = [f"name: {spec.name}", f"degree: {spec.degree}"]
    lines.append("generators: " + ", ".join(spec.generators))
    if spec.expected_sigma is not None:
        if spec.expected_sigma == float("inf"):
            lines.append("expected_sigma: infinity")
        else:
            lines.append(f"expected_sigma: {spec.expected_sigma}")
        lines.append(f"sigma_source: {spec.sigma_source}")
    if spec.provenance:
        lines.append(f"provenance: {spec.provenance}")
    if spec.tags:
        lines.append("tags: " + ", ".join(spec.tags))
    if spec.maximal_subgroups is not None:
        lines.append("maximal_subgroups:")
        for ws in spec.maximal_subgroups:
            lines.append("- " + ", ".join(ws))
    return "\n".join(lines) + "\n"


def save_spec(spec: GroupSpec, path: str | Path) -> None:
    Path(path).write_text(format_spec(spec))


def spec_from_group(G: Group, **extra) -> GroupSpec:
    gens = [g.word() for g in G.generators] or []
    return GroupSpec(name=G.name, degree=G.degree, generators=gens, **extra)
