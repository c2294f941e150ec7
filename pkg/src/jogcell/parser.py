"""Command grammar: normalized token streams to a command AST.

One line holds one command, optionally chained: `and` concatenates
commands into a sequence, `then` fuses consecutive directional moves
into a single net displacement.  Directions map to workcell axes as
front=+x, back=-x, left=+y, right=-y, up=+z, down=-z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import Token

DIRECTIONS = ("up", "down", "left", "right", "back", "front")
STEP_PRESETS = {"low": 10, "medium": 50, "high": 100}

# Filler words allowed next to gripper and tool commands ("open tool",
# "rotate tool 90") and before template offsets ("stack table distance 50").
_TOOL_WORDS = {"tool", "gripper"}


class ParseError(ValueError):
    """Base for all command rejections; str(err) is the operator diagnostic."""


class UnknownCommand(ParseError):
    pass


class MalformedArguments(ParseError):
    pass


class MixedConnective(ParseError):
    """`then` may only join directional moves."""


@dataclass(frozen=True)
class Command:
    pass


@dataclass(frozen=True)
class StartRobot(Command):
    pass


@dataclass(frozen=True)
class StopRobot(Command):
    pass


@dataclass(frozen=True)
class SetModeStep(Command):
    pass


@dataclass(frozen=True)
class SetModeContinuous(Command):
    pass


@dataclass(frozen=True)
class SavePosition(Command):
    name: str


@dataclass(frozen=True)
class MoveToPosition(Command):
    name: str


@dataclass(frozen=True)
class DirectionalMove(Command):
    direction: str
    magnitude: int | None = None  # mm; None means "one step"


@dataclass(frozen=True)
class StopExecution(Command):
    pass


@dataclass(frozen=True)
class SetStepSize(Command):
    size: int | None = None      # mm
    preset: str | None = None    # low | medium | high


@dataclass(frozen=True)
class OpenGripper(Command):
    pass


@dataclass(frozen=True)
class CloseGripper(Command):
    pass


@dataclass(frozen=True)
class RotateTool(Command):
    degrees: int


@dataclass(frozen=True)
class Home(Command):
    pass


@dataclass(frozen=True)
class RecordStart(Command):
    name: str


@dataclass(frozen=True)
class RecordFinish(Command):
    pass


@dataclass(frozen=True)
class RunTask(Command):
    name: str


@dataclass(frozen=True)
class Repeat(Command):
    task: str
    times: int | None = None
    list_name: str | None = None
    continuous: bool = False


@dataclass(frozen=True)
class Pick(Command):
    pose: str


@dataclass(frozen=True)
class Place(Command):
    pose: str


@dataclass(frozen=True)
class Stack(Command):
    pose: str
    offset: int  # mm above the pose


@dataclass(frozen=True)
class Hold(Command):
    """Place-like descent that keeps the gripper closed (supporting a part
    while the operator works on it)."""

    pose: str
    offset: int


@dataclass(frozen=True)
class Push(Command):
    pose: str
    direction: str
    length: int | None = None  # mm of traversal each side of the pose


@dataclass(frozen=True)
class Again(Command):
    pass


@dataclass(frozen=True)
class ListAdd(Command):
    """Plumbing: append a pose name to a named position list."""

    list_name: str
    pose: str


@dataclass(frozen=True)
class Sequence(Command):
    children: tuple[Command, ...]


@dataclass(frozen=True)
class FusedMove(Command):
    moves: tuple[DirectionalMove, ...]


@dataclass(frozen=True)
class ParseOutcome:
    """Either a parsed command or a rejection diagnostic, never both."""

    command: Command | None = None
    diagnostic: str | None = None

    @property
    def ok(self) -> bool:
        return self.command is not None


def _name_from(tokens: list[Token], what: str) -> str:
    """Join remaining tokens into one identifier; numbers use digit form."""
    if not tokens:
        raise MalformedArguments(f"{what} needs a name")
    return "".join(str(t.value) if t.is_number else t.text for t in tokens)


def _expect_empty(tokens: list[Token], head: str) -> None:
    if tokens:
        extra = " ".join(t.text for t in tokens)
        raise MalformedArguments(f"unexpected words after '{head}': {extra}")


def _parse_directional(tokens: list[Token], in_fusion: bool = False) -> DirectionalMove:
    if tokens and tokens[0].text == "move":
        tokens = tokens[1:]
    if not tokens or tokens[0].kind != "word" or tokens[0].text not in DIRECTIONS:
        if in_fusion:
            raise MixedConnective("'then' joins directional moves only")
        raise MalformedArguments("expected a direction (up, down, left, right, back, front)")
    direction = tokens[0].text
    rest = tokens[1:]
    if not rest:
        return DirectionalMove(direction)
    if len(rest) == 1 and rest[0].is_number:
        return DirectionalMove(direction, rest[0].value)
    raise MalformedArguments(f"bad arguments for '{direction}' move")


def _strip_offset(tokens: list[Token], head: str) -> tuple[list[Token], int]:
    """Split `<name...> [distance] <value>` into name tokens and the value."""
    if len(tokens) < 2 or not tokens[-1].is_number:
        raise MalformedArguments(f"'{head}' needs a pose name and an offset")
    name_tokens = tokens[:-1]
    if name_tokens and name_tokens[-1].text == "distance":
        name_tokens = name_tokens[:-1]
    return name_tokens, tokens[-1].value


def _parse_single(tokens: list[Token]) -> Command:
    head = tokens[0]
    rest = tokens[1:]
    if head.is_number:
        raise UnknownCommand(f"a command cannot start with a number: {head.text}")
    word = head.text

    if word == "move":
        return _parse_directional(tokens)
    if word in DIRECTIONS:
        return _parse_directional(tokens)

    if word == "start":
        if [t.text for t in rest] != ["robot"]:
            raise MalformedArguments("expected 'start robot'")
        return StartRobot()
    if word == "stop":
        texts = [t.text for t in rest]
        if texts == ["robot"]:
            return StopRobot()
        if texts in (["execution"], []):
            return StopExecution()
        raise MalformedArguments("expected 'stop robot' or 'stop execution'")
    if word in ("set", "mode"):
        texts = [t.text for t in rest]
        if word == "set":
            if len(texts) != 2 or texts[0] != "mode":
                raise MalformedArguments("expected 'set mode step|continuous'")
            mode = texts[1]
        else:
            if len(texts) != 1:
                raise MalformedArguments("expected 'mode step|continuous'")
            mode = texts[0]
        if mode == "step":
            return SetModeStep()
        if mode == "continuous":
            return SetModeContinuous()
        raise MalformedArguments(f"unknown mode '{mode}'")
    if word == "save":
        if not rest or rest[0].text != "position":
            raise MalformedArguments("expected 'save position <name>'")
        return SavePosition(_name_from(rest[1:], "save position"))
    if word == "load":
        if not rest or rest[0].text != "position":
            raise MalformedArguments("expected 'load position <name>'")
        return MoveToPosition(_name_from(rest[1:], "load position"))
    if word == "position":
        return MoveToPosition(_name_from(rest, "position"))
    if word == "step":
        if not rest or rest[0].text != "size" or len(rest) != 2:
            raise MalformedArguments("expected 'step size <value|low|medium|high>'")
        arg = rest[1]
        if arg.is_number:
            return SetStepSize(size=arg.value)
        if arg.text in STEP_PRESETS:
            return SetStepSize(preset=arg.text)
        raise MalformedArguments(f"bad step size '{arg.text}'")
    if word in ("open", "close"):
        if rest and not (len(rest) == 1 and rest[0].text in _TOOL_WORDS):
            raise MalformedArguments(f"unexpected words after '{word}'")
        return OpenGripper() if word == "open" else CloseGripper()
    if word == "rotate":
        if rest and rest[0].text in _TOOL_WORDS:
            rest = rest[1:]
        if len(rest) != 1 or not rest[0].is_number:
            raise MalformedArguments("'rotate' needs an angle in degrees")
        return RotateTool(rest[0].value)
    if word == "home":
        _expect_empty(rest, "home")
        return Home()
    if word == "record":
        return RecordStart(_name_from(rest, "record"))
    if word == "finish":
        _expect_empty(rest, "finish")
        return RecordFinish()
    if word == "task":
        return RunTask(_name_from(rest, "task"))
    if word == "repeat":
        if len(rest) != 2:
            raise MalformedArguments("expected 'repeat <task> <times|continuous|list>'")
        task = _name_from(rest[:1], "repeat")
        arg = rest[1]
        if arg.is_number:
            return Repeat(task, times=arg.value)
        if arg.text == "continuous":
            return Repeat(task, continuous=True)
        return Repeat(task, list_name=arg.text)
    if word == "pick":
        return Pick(_name_from(rest, "pick"))
    if word == "place":
        return Place(_name_from(rest, "place"))
    if word == "stack":
        name_tokens, offset = _strip_offset(rest, "stack")
        return Stack(_name_from(name_tokens, "stack"), offset)
    if word == "hold":
        name_tokens, offset = _strip_offset(rest, "hold")
        return Hold(_name_from(name_tokens, "hold"), offset)
    if word == "push":
        length: int | None = None
        if rest and rest[-1].is_number:
            length = rest[-1].value
            rest = rest[:-1]
        if not rest or rest[-1].text not in DIRECTIONS:
            raise MalformedArguments("expected 'push <pose> <direction> [<mm>]'")
        direction = rest[-1].text
        return Push(_name_from(rest[:-1], "push"), direction, length)
    if word == "again":
        _expect_empty(rest, "again")
        return Again()
    if word == "list":
        texts = [t.text for t in rest]
        if len(texts) == 3 and texts[1] == "add":
            return ListAdd(texts[0], texts[2])
        raise MalformedArguments("expected 'list <name> add <pose>'")

    raise UnknownCommand(f"unknown command '{word}'")


def _split_on(tokens: list[Token], word: str) -> list[list[Token]]:
    parts: list[list[Token]] = [[]]
    for token in tokens:
        if token.kind == "word" and token.text == word:
            parts.append([])
        else:
            parts[-1].append(token)
    return parts


def parse(tokens: list[Token]) -> Command:
    """Parse one line of tokens; raises a ParseError subclass on rejection."""
    if not tokens:
        raise UnknownCommand("empty command")
    clauses = _split_on(tokens, "and")
    commands: list[Command] = []
    for clause in clauses:
        if not clause:
            raise MalformedArguments("empty clause around 'and'")
        segments = _split_on(clause, "then")
        if len(segments) > 1:
            moves = []
            for segment in segments:
                if not segment:
                    raise MalformedArguments("empty clause around 'then'")
                moves.append(_parse_directional(segment, in_fusion=True))
            commands.append(FusedMove(tuple(moves)))
        else:
            commands.append(_parse_single(clause))
    if len(commands) == 1:
        return commands[0]
    return Sequence(tuple(commands))


def try_parse(tokens: list[Token]) -> ParseOutcome:
    """Exception-free wrapper used by the dispatcher and the console."""
    try:
        return ParseOutcome(command=parse(tokens))
    except ParseError as err:
        return ParseOutcome(diagnostic=f"{type(err).__name__}: {err}")


def command_heads() -> list[str]:
    """Every recognized first word, sorted; drives console autocomplete."""
    heads = {
        "start", "stop", "set", "mode", "save", "load", "position", "move",
        "step", "open", "close", "rotate", "home", "record", "finish",
        "task", "repeat", "pick", "place", "stack", "hold", "push", "again",
        "list",
    }
    heads.update(DIRECTIONS)
    return sorted(heads)


def render_command(cmd: Command) -> str:
    """Canonical text for a command; parse(normalize(render(c))) == c."""
    if isinstance(cmd, StartRobot):
        return "start robot"
    if isinstance(cmd, StopRobot):
        return "stop robot"
    if isinstance(cmd, SetModeStep):
        return "set mode step"
    if isinstance(cmd, SetModeContinuous):
        return "set mode continuous"
    if isinstance(cmd, SavePosition):
        return f"save position {cmd.name}"
    if isinstance(cmd, MoveToPosition):
        return f"position {cmd.name}"
    if isinstance(cmd, DirectionalMove):
        if cmd.magnitude is None:
            return cmd.direction
        return f"{cmd.direction} {cmd.magnitude}"
    if isinstance(cmd, StopExecution):
        return "stop execution"
    if isinstance(cmd, SetStepSize):
        return f"step size {cmd.preset if cmd.preset else cmd.size}"
    if isinstance(cmd, OpenGripper):
        return "open"
    if isinstance(cmd, CloseGripper):
        return "close"
    if isinstance(cmd, RotateTool):
        return f"rotate {cmd.degrees}"
    if isinstance(cmd, Home):
        return "home"
    if isinstance(cmd, RecordStart):
        return f"record {cmd.name}"
    if isinstance(cmd, RecordFinish):
        return "finish"
    if isinstance(cmd, RunTask):
        return f"task {cmd.name}"
    if isinstance(cmd, Repeat):
        if cmd.continuous:
            return f"repeat {cmd.task} continuous"
        if cmd.list_name is not None:
            return f"repeat {cmd.task} {cmd.list_name}"
        return f"repeat {cmd.task} {cmd.times}"
    if isinstance(cmd, Pick):
        return f"pick {cmd.pose}"
    if isinstance(cmd, Place):
        return f"place {cmd.pose}"
    if isinstance(cmd, Stack):
        return f"stack {cmd.pose} {cmd.offset}"
    if isinstance(cmd, Hold):
        return f"hold {cmd.pose} {cmd.offset}"
    if isinstance(cmd, Push):
        if cmd.length is None:
            return f"push {cmd.pose} {cmd.direction}"
        return f"push {cmd.pose} {cmd.direction} {cmd.length}"
    if isinstance(cmd, Again):
        return "again"
    if isinstance(cmd, ListAdd):
        return f"list {cmd.list_name} add {cmd.pose}"
    if isinstance(cmd, Sequence):
        return " and ".join(render_command(c) for c in cmd.children)
    if isinstance(cmd, FusedMove):
        return " then ".join(render_command(m) for m in cmd.moves)
    raise ValueError(f"not renderable: {cmd!r}")
