"""Text file formats for instances and embeddings.

An instance file holds `l <id> <slope> <offset>` rows (rationals as `p/q` or
integers), `e <parent> <child>` rows (root is vertex 0) and optional
`a <vertex> <line-id>` rows.  An embedding file holds `p <vertex> <x>` rows.
Comments start with `#`.  All errors carry the 1-based source line number.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .geometry import Line
from .lineset import LineSet, LineSetError, verify_general_position
from .embed import Assignment, EmbedError, Embedding, Tree


class ParseError(ValueError):
    def __init__(self, lineno: Optional[int], message: str):
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{message}")
        self.lineno = lineno


class SyntaxProblem(ParseError):
    pass


class ValidationProblem(ParseError):
    pass


def _rational(tok: str, lineno: int) -> Fraction:
    if "." in tok or "e" in tok.lower():
        raise SyntaxProblem(lineno, f"rationals only, got {tok!r}")
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SyntaxProblem(lineno, f"bad rational {tok!r}")


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SyntaxProblem(lineno, f"bad integer {tok!r}")


def _rows(text: Union[bytes, str]) -> List[Tuple[int, List[str]]]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SyntaxProblem(None, f"not UTF-8: {exc}")
    out = []
    for k, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((k, body.split()))
    return out


def parse_lines(text: Union[bytes, str]) -> LineSet:
    """Parse a lines-only document (other directives rejected)."""
    ls, _, _ = _parse(text, allow_tree=False, require_assign=False)
    return ls


def parse_instance(text: Union[bytes, str], require_assign: bool = True
                   ) -> Tuple[LineSet, Tree, Optional[Assignment]]:
    return _parse(text, allow_tree=True, require_assign=require_assign)


def _parse(text, allow_tree: bool, require_assign: bool):
    lines: List[Tuple[int, int, Fraction, Fraction]] = []
    edges: List[Tuple[int, int, int]] = []
    assigns: List[Tuple[int, int, int]] = []
    for lineno, toks in _rows(text):
        tag = toks[0]
        if tag == "l":
            if len(toks) != 4:
                raise SyntaxProblem(lineno, "expected: l <id> <slope> "
                                            "<offset>")
            lines.append((lineno, _int(toks[1], lineno),
                          _rational(toks[2], lineno),
                          _rational(toks[3], lineno)))
        elif tag == "e" and allow_tree:
            if len(toks) != 3:
                raise SyntaxProblem(lineno, "expected: e <parent> <child>")
            edges.append((lineno, _int(toks[1], lineno),
                          _int(toks[2], lineno)))
        elif tag == "a" and allow_tree:
            if len(toks) != 3:
                raise SyntaxProblem(lineno, "expected: a <vertex> <line-id>")
            assigns.append((lineno, _int(toks[1], lineno),
                            _int(toks[2], lineno)))
        else:
            raise SyntaxProblem(lineno, f"unknown directive {tag!r}")

    if not lines:
        raise ValidationProblem(None, "no lines declared")
    ids = [i for _, i, _, _ in lines]
    if len(set(ids)) != len(ids):
        raise ValidationProblem(lines[0][0], "duplicate line ids")
    try:
        ls = verify_general_position(
            [Line(s, b, i) for _, i, s, b in lines])
    except LineSetError as exc:
        raise ValidationProblem(lines[0][0], str(exc))
    # declared ids must match the slope-sorted numbering the library uses
    by_slope = sorted(lines, key=lambda row: row[2])
    for rank, (lineno, i, _, _) in enumerate(by_slope, 1):
        if i != rank:
            raise ValidationProblem(
                lineno, f"line id {i} is not its slope rank {rank}; ids "
                        f"must be 1..n in increasing slope order")

    if not allow_tree:
        return ls, None, None

    if not edges:
        raise ValidationProblem(None, "no tree edges declared")
    n = len(edges) + 1
    try:
        tree = Tree(n, 0, tuple((u, v) for _, u, v in edges))
    except EmbedError as exc:
        raise ValidationProblem(edges[0][0], str(exc))

    asg: Optional[Assignment] = None
    if assigns:
        iota: Dict[int, int] = {}
        for lineno, v, i in assigns:
            if v in iota:
                raise ValidationProblem(lineno, f"vertex {v} assigned twice")
            iota[v] = i
        if sorted(iota) != list(range(n)):
            raise ValidationProblem(assigns[0][0],
                                    "assignment is not total over vertices")
        asg = Assignment(tuple(iota[v] for v in range(n)))
        try:
            asg.check_bijection(len(ls))
        except EmbedError as exc:
            raise ValidationProblem(assigns[0][0], str(exc))
    elif require_assign:
        raise ValidationProblem(None, "assignment section missing")
    return ls, tree, asg


def parse_embedding(text: Union[bytes, str], n: int) -> Embedding:
    pos: Dict[int, Fraction] = {}
    for lineno, toks in _rows(text):
        if toks[0] != "p" or len(toks) != 3:
            raise SyntaxProblem(lineno, "expected: p <vertex> <x>")
        v = _int(toks[1], lineno)
        if v in pos:
            raise ValidationProblem(lineno, f"vertex {v} placed twice")
        pos[v] = _rational(toks[2], lineno)
    if sorted(pos) != list(range(n)):
        raise ValidationProblem(None, f"need one row per vertex 0..{n - 1}")
    return Embedding(tuple(pos[v] for v in range(n)))


def serialize_lines(ls: LineSet) -> str:
    return "".join(f"l {l.id} {l.slope} {l.dual_offset}\n" for l in ls)


def serialize_instance(ls: LineSet, t: Tree,
                       asg: Optional[Assignment]) -> str:
    out = [serialize_lines(ls)]
    out += [f"e {u} {v}\n" for u, v in t.edges]
    if asg is not None:
        out += [f"a {v} {asg.line_of(v)}\n" for v in range(t.n)]
    return "".join(out)


def serialize_embedding(emb: Embedding) -> str:
    return "".join(f"p {v} {x}\n" for v, x in enumerate(emb.pos))
