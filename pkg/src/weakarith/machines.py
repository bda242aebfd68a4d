"""Counter machines, program numbering, and staged oracle pairs.

Machine model: registers r0, r1, ... hold naturals; the input goes in r1 and
the output is read from r0. Instructions:

    inc r        increment register r
    decjz r t    if register r is zero jump to instruction t, else decrement
    halt         stop

Program counter past the last instruction also halts. Executed inc/decjz
instructions each cost one step; reaching halt (or falling off the end) is
free, so the empty program halts within 0 steps.

Program numbering:

    instr code: halt = 0, inc r = 1 + 2r, decjz r t = 2 + 2*pair(r, t)
    program code = list code of instruction codes (list as in the formula
    numbering: [] = 0, x:rest = pair(x, list(rest)) + 1)

Every natural decodes: code 0 is the empty program (immediate halt, by
convention), and any decoded program whose jump target exceeds the program
length is normalized to the one-instruction halt program.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import FormatError, WorkbenchError
from .godel import pair, unpair

INC = "inc"
DECJZ = "decjz"
HALT = "halt"

Instruction = tuple


@dataclass(frozen=True)
class Program:
    instructions: tuple


def inc(r: int) -> Instruction:
    return (INC, r)


def decjz(r: int, target: int) -> Instruction:
    return (DECJZ, r, target)


HALT_INSTR: Instruction = (HALT,)


def run_bounded(program: Program, input_value: int, steps: int) -> int | None:
    """Run with input in r1 for at most the given number of steps.

    Returns the r0 value when the machine halts within the budget, else None.
    """
    instrs = program.instructions
    n = len(instrs)
    nregs = 2
    for op in instrs:
        if len(op) > 1 and op[1] + 1 > nregs:
            nregs = op[1] + 1
    regs = [0] * nregs
    regs[1] = input_value
    pc = 0
    left = steps
    while True:
        if pc >= n:
            return regs[0]
        op = instrs[pc]
        kind = op[0]
        if kind == HALT:
            return regs[0]
        if left <= 0:
            return None
        left -= 1
        if kind == INC:
            regs[op[1]] += 1
            pc += 1
        else:  # decjz
            r = op[1]
            if regs[r] == 0:
                pc = op[2]
            else:
                regs[r] -= 1
                pc += 1


def _encode_instruction(op: Instruction) -> int:
    kind = op[0]
    if kind == HALT:
        return 0
    if kind == INC:
        return 1 + 2 * op[1]
    if kind == DECJZ:
        return 2 + 2 * pair(op[1], op[2])
    raise WorkbenchError(f"unknown instruction {op!r}")


def _decode_instruction(code: int) -> Instruction:
    if code == 0:
        return HALT_INSTR
    if code % 2 == 1:
        return (INC, (code - 1) // 2)
    r, t = unpair((code - 2) // 2)
    return (DECJZ, r, t)


def encode_program(program: Program) -> int:
    acc = 0
    for op in reversed(program.instructions):
        acc = pair(_encode_instruction(op), acc) + 1
    return acc


def decode_program(code: int) -> Program:
    """Total decoding; jump targets out of range normalize to immediate halt."""
    instrs = []
    while code != 0:
        head, code = unpair(code - 1)
        instrs.append(_decode_instruction(head))
    n = len(instrs)
    for op in instrs:
        if op[0] == DECJZ and op[2] > n:
            return Program((HALT_INSTR,))
    return Program(tuple(instrs))


def parse_program(text: str) -> Program:
    """One instruction per line; blank lines skipped."""
    instrs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        kind = parts[0]
        try:
            if kind == HALT and len(parts) == 1:
                instrs.append(HALT_INSTR)
            elif kind == INC and len(parts) == 2:
                instrs.append(inc(int(parts[1])))
            elif kind == DECJZ and len(parts) == 3:
                instrs.append(decjz(int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise FormatError(f"line {lineno}: bad instruction {raw.strip()!r}") from None
    return Program(tuple(instrs))


def format_program(program: Program) -> str:
    lines = []
    for op in program.instructions:
        lines.append(" ".join(str(x) for x in op))
    return "\n".join(lines)


# --- staged sets and oracle pairs ---------------------------------------

class StageSet:
    """Total monotone map from a stage number to a finite set of naturals."""

    def at(self, stage: int) -> frozenset[int]:
        raise NotImplementedError


class FiniteStageSet(StageSet):
    """Constant stage map: the whole finite set is known from stage 0 on."""

    def __init__(self, elements: Iterable[int]):
        self.elements = frozenset(elements)

    def at(self, stage: int) -> frozenset[int]:
        return self.elements


class ComputedStageSet(StageSet):
    """Stage map given by a function; results are memoized per stage."""

    def __init__(self, fn: Callable[[int], Iterable[int]]):
        self.fn = fn
        self._cache: dict[int, frozenset[int]] = {}

    def at(self, stage: int) -> frozenset[int]:
        got = self._cache.get(stage)
        if got is None:
            got = frozenset(self.fn(stage))
            self._cache[stage] = got
        return got


class StageDisjointnessError(WorkbenchError):
    pass


@dataclass(frozen=True)
class Membership:
    """Three-valued oracle answer: 'in', 'out', or 'unknown' at a stage."""

    status: str
    stage: int | None = None

    def __str__(self) -> str:
        if self.status == "unknown":
            return f"unknown@{self.stage}"
        return self.status


class OraclePair:
    """A pair of staged sets promised disjoint; checked lazily per stage.

    finite mode (both sides FiniteStageSet) supports definite 'out' answers;
    enumerative mode answers 'unknown' for anything not yet enumerated.
    """

    def __init__(self, left: StageSet, right: StageSet):
        self.left = left
        self.right = right
        self.finite = isinstance(left, FiniteStageSet) and isinstance(right, FiniteStageSet)

    def check_stage(self, stage: int) -> None:
        clash = self.left.at(stage) & self.right.at(stage)
        if clash:
            raise StageDisjointnessError(
                f"sides share {sorted(clash)} at stage {stage}")

    def query(self, side: str, n: int, stage: int) -> Membership:
        if side not in ("left", "right"):
            raise WorkbenchError(f"bad side {side!r}")
        self.check_stage(stage)
        members = (self.left if side == "left" else self.right).at(stage)
        if n in members:
            return Membership("in")
        if self.finite:
            return Membership("out")
        return Membership("unknown", stage)


def canonical_pair() -> OraclePair:
    """The computably inseparable pair built over the program numbering.

    left(s)  = { e <= s : program e on input e halts within s steps with output 0 }
    right(s) = same with output 1.

    Halting runs are memoized per program index, so stage ladders are cheap.
    """
    cache: dict[int, tuple[int, int | None, int | None]] = {}
    # cache[e] = (probed_budget, halt_step, output); halt_step None = no halt seen

    def probe(e: int, budget: int) -> tuple[int | None, int | None]:
        probed, halt_step, output = cache.get(e, (-1, None, None))
        if halt_step is not None or probed >= budget:
            return halt_step, output
        program = decode_program(e)
        instrs = program.instructions
        n = len(instrs)
        nregs = 2
        for op in instrs:
            if len(op) > 1 and op[1] + 1 > nregs:
                nregs = op[1] + 1
        regs = [0] * nregs
        regs[1] = e
        pc = 0
        step = 0
        while True:
            if pc >= n or instrs[pc][0] == HALT:
                cache[e] = (budget, step, regs[0])
                return step, regs[0]
            if step >= budget:
                cache[e] = (budget, None, None)
                return None, None
            step += 1
            op = instrs[pc]
            if op[0] == INC:
                regs[op[1]] += 1
                pc += 1
            else:
                r = op[1]
                if regs[r] == 0:
                    pc = op[2]
                else:
                    regs[r] -= 1
                    pc += 1

    def side(want: int):
        def stage_fn(s: int):
            out = []
            for e in range(s + 1):
                halt_step, result = probe(e, s)
                if halt_step is not None and halt_step <= s and result == want:
                    out.append(e)
            return out
        return ComputedStageSet(stage_fn)

    return OraclePair(side(0), side(1))


def parse_pair_spec(text: str) -> OraclePair:
    """Parse a pair spec: 'canonical', or 'finite B={1,2} C={3}'.

    The two set labels are free-form identifiers; semantics are positional
    (first group is the left side, second the right side).
    """
    stripped = text.strip()
    if stripped == "canonical":
        return canonical_pair()
    parts = stripped.split(None, 1)
    if not parts or parts[0] != "finite" or len(parts) < 2:
        raise FormatError(f"bad pair spec {text!r}")
    import re
    groups = re.findall(r"([A-Za-z_]\w*)=\{([0-9,\s]*)\}", parts[1])
    if len(groups) != 2:
        raise FormatError(f"pair spec needs exactly two NAME={{...}} groups: {text!r}")
    sides = []
    for _, body in groups:
        items = [p.strip() for p in body.split(",")]
        sides.append(frozenset(int(p) for p in items if p))
    pair_ = OraclePair(FiniteStageSet(sides[0]), FiniteStageSet(sides[1]))
    pair_.check_stage(0)
    return pair_


def format_pair_spec(pair_: OraclePair) -> str:
    if pair_.finite:
        b = ",".join(str(x) for x in sorted(pair_.left.at(0)))
        c = ",".join(str(x) for x in sorted(pair_.right.at(0)))
        return f"finite B={{{b}}} C={{{c}}}"
    return "canonical"
