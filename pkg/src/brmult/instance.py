"""Instance files: a line-oriented block format for rings, modules, ideals,
endomorphisms and tasks.

Example::

    ring
      vars x y
      field fp:32003
    end
    endo P
      rank 1
      row x
    end
    endo Q
      rank 2
      row y, x
      row x, y
    end
    task koszul-chi
      endos P Q
    end
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field, replace

from brmult.config import DEFAULT_FIELD, FieldSpec
from brmult.errors import BrmultError, InstanceError, InstanceSyntaxError, PreconditionError
from brmult.exactla import field_from_spec
from brmult.icmod.closure import FREE, ICModuleSpec, Summand
from brmult.koszul import Endo
from brmult.localring.ideal import MIdeal
from brmult.localring.parser import parse_poly
from brmult.localring.poly import Poly, PolyRing
from brmult.submod import Submodule

logger = logging.getLogger(__name__)

BLOCKS = ("ring", "ideal", "module", "icmodule", "endo", "task")


@dataclass(frozen=True)
class IdealDecl:
    name: str
    gens: tuple[Poly, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    rank: int
    columns: tuple[tuple[Poly, ...], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ICModuleDecl:
    name: str
    spec: ICModuleSpec
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class EndoDecl:
    name: str
    endo: Endo
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TaskDecl:
    """A command with references to declared objects and optional arguments."""

    command: str
    modules: tuple[str, ...] = ()
    endos: tuple[str, ...] = ()
    window: tuple[int, ...] | None = None
    n: tuple[int, ...] | None = None
    seed: int | None = None
    line: int = field(default=0, compare=False)


@dataclass
class InstanceFile:
    """A parsed instance: one ring plus named objects and tasks."""

    variables: tuple[str, ...]
    field_spec: FieldSpec
    ring: PolyRing
    ideals: dict[str, IdealDecl] = field(default_factory=dict)
    modules: dict[str, ModuleDecl] = field(default_factory=dict)
    icmodules: dict[str, ICModuleDecl] = field(default_factory=dict)
    endos: dict[str, EndoDecl] = field(default_factory=dict)
    tasks: list[TaskDecl] = field(default_factory=list)
    order: list[str] = field(default_factory=list, compare=False)

    @property
    def module_names(self) -> list[str]:
        """Ideals, modules and icmodules in declaration order."""
        return [n for n in self.order if n not in self.endos]

    @property
    def endo_names(self) -> list[str]:
        return [n for n in self.order if n in self.endos]

    def submodule(self, name: str) -> Submodule:
        if name in self.modules:
            decl = self.modules[name]
            return Submodule(self.ring, decl.rank, decl.columns)
        if name in self.ideals:
            return Submodule.from_ideal(self.ideal(name))
        if name in self.icmodules:
            return self.icmodules[name].spec.realize(self.ring)
        raise InstanceError(f"no module, ideal or icmodule named {name!r}")

    def ideal(self, name: str) -> MIdeal:
        if name in self.ideals:
            return MIdeal(self.ring, self.ideals[name].gens)
        if name in self.icmodules and self.icmodules[name].spec.rank == 1:
            return self.icmodules[name].spec.summands[0].ideal(self.ring)
        if name in self.modules and self.modules[name].rank == 1:
            return MIdeal(self.ring, tuple(c[0] for c in self.modules[name].columns))
        raise InstanceError(f"{name!r} is not an ideal")

    def endo(self, name: str) -> Endo:
        if name not in self.endos:
            raise InstanceError(f"no endo named {name!r}")
        return self.endos[name].endo

    def icmodule(self, name: str) -> ICModuleSpec:
        if name not in self.icmodules:
            raise InstanceError(f"no icmodule named {name!r}")
        return self.icmodules[name].spec

    def tasks_for(self, command: str) -> list[TaskDecl]:
        return [t for t in self.tasks if t.command == command]


@dataclass
class _Line:
    number: int
    text: str  # comment stripped, right-stripped
    indent: int  # 0-based offset of the first word

    @property
    def words(self) -> list[str]:
        return self.text.split()

    def rest(self) -> tuple[str, int]:
        """Text after the first word and its 1-based column."""
        word = self.words[0]
        start = self.indent + len(word)
        tail = self.text[start:]
        stripped = tail.lstrip()
        return stripped, start + len(tail) - len(stripped) + 1

    def error(self, message: str, column: int | None = None) -> InstanceError:
        return InstanceError(message, self.number, column or self.indent + 1)

    def syntax(self, message: str, column: int | None = None) -> InstanceSyntaxError:
        return InstanceSyntaxError(message, self.number, column or self.indent + 1)


def _lines(text: str) -> Iterator[_Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            yield _Line(number, body, len(body) - len(body.lstrip()))


def _split_entries(text: str, column: int) -> list[tuple[str, int]]:
    """Comma separated entries with their 1-based columns."""
    out = []
    offset = 0
    for piece in text.split(","):
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), column + offset + lead))
        offset += len(piece) + 1
    return out


def _int_list(line: _Line, text: str, column: int) -> tuple[int, ...]:
    values = []
    for entry, col in _split_entries(text, column):
        try:
            values.append(int(entry))
        except ValueError:
            raise line.syntax(f"expected an integer, got {entry!r}", col) from None
    return tuple(values)


class _InstanceParser:
    def __init__(self, text: str, field_override: FieldSpec | None) -> None:
        self.lines = list(_lines(text))
        self.pos = 0
        self.field_override = field_override
        self.instance: InstanceFile | None = None

    def next_line(self, block: _Line) -> _Line:
        if self.pos >= len(self.lines):
            raise block.syntax(f"block '{block.words[0]}' is missing 'end'")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def body(self, header: _Line, nested: tuple[str, ...] = ()) -> Iterator[_Line]:
        while True:
            line = self.next_line(header)
            if line.words == ["end"]:
                return
            if line.words[0] in BLOCKS and line.words[0] not in nested:
                raise line.syntax(f"expected 'end' before '{line.words[0]}'")
            yield line

    def parse(self) -> InstanceFile:
        while self.pos < len(self.lines):
            header = self.lines[self.pos]
            self.pos += 1
            keyword = header.words[0]
            if keyword == "ring":
                self.ring_block(header)
                continue
            if keyword not in BLOCKS:
                raise header.syntax(f"expected one of {', '.join(BLOCKS)}, got {keyword!r}")
            if len(header.words) != 2:
                raise header.syntax(f"'{keyword}' takes exactly one name")
            instance = self.require_ring(header)
            name = header.words[1]
            if keyword == "task":
                instance.tasks.append(self.task_block(header, name))
                continue
            if name in instance.order:
                raise header.error(f"name {name!r} is already declared")
            if keyword == "ideal":
                instance.ideals[name] = self.ideal_block(header, name)
            elif keyword == "module":
                instance.modules[name] = self.module_block(header, name)
            elif keyword == "icmodule":
                instance.icmodules[name] = self.icmodule_block(header, name)
            else:
                instance.endos[name] = self.endo_block(header, name)
            instance.order.append(name)
        if self.instance is None:
            raise InstanceSyntaxError("an instance needs a ring block", 1, 1)
        self.resolve_tasks(self.instance)
        return self.instance

    def require_ring(self, line: _Line) -> InstanceFile:
        if self.instance is None:
            raise line.error("the ring block must come first")
        return self.instance

    def poly(self, line: _Line, text: str, column: int) -> Poly:
        if not text:
            raise line.syntax("expected a polynomial", column)
        return parse_poly(self.require_ring(line).ring, text, line.number, column)

    def ring_block(self, header: _Line) -> None:
        if self.instance is not None:
            raise header.error("only one ring block is allowed")
        variables: tuple[str, ...] = ()
        spec = DEFAULT_FIELD
        for line in self.body(header):
            key = line.words[0]
            if key == "vars":
                variables = tuple(line.words[1:])
            elif key == "field":
                text, column = line.rest()
                try:
                    spec = FieldSpec.parse(text)
                except PreconditionError as exc:
                    raise line.error(str(exc), column) from None
            else:
                raise line.syntax(f"expected 'vars' or 'field', got {key!r}")
        if not variables:
            raise header.error("the ring block needs 'vars'")
        if len(set(variables)) != len(variables):
            raise header.error("ring variables must be distinct")
        chosen = self.field_override or spec
        try:
            ring = PolyRing(variables, field_from_spec(chosen))
        except PreconditionError as exc:
            raise header.error(str(exc)) from None
        self.instance = InstanceFile(variables, spec, ring)

    def ideal_block(self, header: _Line, name: str) -> IdealDecl:
        gens = []
        for line in self.body(header):
            gens.append(self.poly(line, line.text.strip(), line.indent + 1))
        return IdealDecl(name, tuple(gens), header.number)

    def rank_line(self, line: _Line) -> int:
        if len(line.words) != 2 or not line.words[1].isdigit() or int(line.words[1]) < 1:
            raise line.syntax("expected 'rank <positive integer>'")
        return int(line.words[1])

    def module_block(self, header: _Line, name: str) -> ModuleDecl:
        rank: int | None = None
        columns = []
        for line in self.body(header):
            key = line.words[0]
            if key == "rank":
                rank = self.rank_line(line)
            elif key == "column":
                if rank is None:
                    raise line.error(f"module {name}: 'rank' must precede columns")
                text, column = line.rest()
                entries = _split_entries(text, column)
                if len(entries) != rank:
                    raise line.error(
                        f"module {name}: column has {len(entries)} entries, expected rank {rank}"
                    )
                columns.append(tuple(self.poly(line, e, c) for e, c in entries))
            else:
                raise line.syntax(f"expected 'rank' or 'column', got {key!r}")
        if rank is None:
            raise header.error(f"module {name} needs 'rank'")
        return ModuleDecl(name, rank, tuple(columns), header.number)

    def icmodule_block(self, header: _Line, name: str) -> ICModuleDecl:
        summands = []
        for line in self.body(header, nested=("ideal",)):
            key = line.words[0]
            if key == "free" and len(line.words) == 1:
                summands.append(FREE)
            elif key == "ideal" and len(line.words) > 1:
                exponents = []
                text, column = line.rest()
                for word in text.split():
                    pair = _int_list(line, word, column + text.index(word))
                    if len(pair) != 2 or min(pair) < 0:
                        raise line.syntax(f"expected an exponent pair 'i,j', got {word!r}")
                    exponents.append(pair)
                summands.append(Summand(tuple(exponents)))
            else:
                raise line.syntax("expected 'free' or 'ideal i,j ...'")
        try:
            spec = ICModuleSpec(tuple(summands))
        except BrmultError as exc:
            raise header.error(f"icmodule {name}: {exc}") from None
        return ICModuleDecl(name, spec, header.number)

    def endo_block(self, header: _Line, name: str) -> EndoDecl:
        rank: int | None = None
        rows = []
        for line in self.body(header):
            key = line.words[0]
            if key == "rank":
                rank = self.rank_line(line)
            elif key == "row":
                if rank is None:
                    raise line.error(f"endo {name}: 'rank' must precede rows")
                text, column = line.rest()
                entries = _split_entries(text, column)
                if len(entries) != rank:
                    raise line.error(
                        f"endo {name}: row has {len(entries)} entries, expected rank {rank}"
                    )
                rows.append(tuple(self.poly(line, e, c) for e, c in entries))
            else:
                raise line.syntax(f"expected 'rank' or 'row', got {key!r}")
        if rank is None or len(rows) != rank:
            raise header.error(f"endo {name} needs 'rank' and exactly that many rows")
        return EndoDecl(name, Endo(self.require_ring(header).ring, tuple(rows)), header.number)

    def task_block(self, header: _Line, command: str) -> TaskDecl:
        task = TaskDecl(command, line=header.number)
        for line in self.body(header):
            key = line.words[0]
            text, column = line.rest()
            if key == "modules":
                task = replace(task, modules=tuple(line.words[1:]))
            elif key == "endos":
                task = replace(task, endos=tuple(line.words[1:]))
            elif key == "window":
                task = replace(task, window=_int_list(line, text, column))
            elif key == "n":
                task = replace(task, n=_int_list(line, text, column))
            elif key == "seed":
                task = replace(task, seed=_int_list(line, text, column)[0])
            else:
                raise line.syntax(f"unknown task argument {key!r}")
        return task

    def resolve_tasks(self, instance: InstanceFile) -> None:
        for task in instance.tasks:
            for name in task.modules:
                if name not in instance.order or name in instance.endos:
                    raise InstanceError(
                        f"task {task.command}: unknown module {name!r}", task.line, 1
                    )
            for name in task.endos:
                if name not in instance.endos:
                    raise InstanceError(
                        f"task {task.command}: unknown endo {name!r}", task.line, 1
                    )


def parse_instance(text: str, field_override: FieldSpec | None = None) -> InstanceFile:
    """Parse instance text; ``field_override`` replaces the declared field."""
    instance = _InstanceParser(text, field_override).parse()
    logger.debug(
        "parsed instance: %d objects, %d tasks", len(instance.order), len(instance.tasks)
    )
    return instance


def _join(values: tuple[int, ...]) -> str:
    return ",".join(str(v) for v in values)


def serialize(instance: InstanceFile) -> str:
    """Canonical text: ring, ideals, modules, icmodules, endos, then tasks."""
    out = ["ring", "  vars " + " ".join(instance.variables)]
    out += [f"  field {instance.field_spec}", "end"]
    for ideal in instance.ideals.values():
        out += [f"ideal {ideal.name}", *(f"  {g}" for g in ideal.gens), "end"]
    for module in instance.modules.values():
        out += [f"module {module.name}", f"  rank {module.rank}"]
        out += ["  column " + ", ".join(str(p) for p in col) for col in module.columns]
        out.append("end")
    for ic in instance.icmodules.values():
        out += [f"icmodule {ic.name}", *(f"  {s}" for s in ic.spec.summands), "end"]
    for endo in instance.endos.values():
        out += [f"endo {endo.name}", f"  rank {endo.endo.rank}"]
        out += ["  row " + ", ".join(str(p) for p in row) for row in endo.endo.matrix]
        out.append("end")
    for task in instance.tasks:
        out.append(f"task {task.command}")
        if task.modules:
            out.append("  modules " + " ".join(task.modules))
        if task.endos:
            out.append("  endos " + " ".join(task.endos))
        if task.window is not None:
            out.append(f"  window {_join(task.window)}")
        if task.n is not None:
            out.append(f"  n {_join(task.n)}")
        if task.seed is not None:
            out.append(f"  seed {task.seed}")
        out.append("end")
    return "\n".join(out) + "\n"
