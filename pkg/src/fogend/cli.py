"""Command-line entry point: ``fogend <subcommand> ...``.

Exit status is 0 when every check passes, 1 on a failed check, 2 on bad
usage and 3 when a search runs out of budget.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional, TextIO

from .board import (
    BLACK, WHITE, GameStatus, Move, Position, PositionError, attacked_squares, apply_move,
    legal_moves, parse_position, square, square_name, visible_squares,
)
from .common import ResourceError, StrategyError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

ENV_DEFAULTS = {
    "FOGEND_PLY_BOUND": 600,
    "FOGEND_STATE_BUDGET": 10 ** 8,
    "FOGEND_DEPTH_BUDGET": 64,
    "FOGEND_WORKERS": 1,
}


def _env_int(name: str) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return ENV_DEFAULTS[name]
    try:
        value = int(float(raw))
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fogend", description="Fog of War chess endgame checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def output_flags(sp):
        sp.add_argument("--output", metavar="PATH", help="also write the structured report here")
        sp.add_argument("--format", choices=("text", "structured"), default="text",
                        help="stdout format (structured: one JSON document per line)")

    v = sub.add_parser("verify", help="exhaustively verify a White strategy")
    v.add_argument("scenario", choices=("kqk", "krrk"))
    v.add_argument("--symmetry", dest="symmetry", action="store_true", default=True,
                   help="one configuration per symmetry class (default)")
    v.add_argument("--no-symmetry", dest="symmetry", action="store_false")
    v.add_argument("--sample", type=_positive, default=1, metavar="K",
                   help="verify every K-th configuration only")
    v.add_argument("--ply-bound", type=_positive, default=None)
    v.add_argument("--workers", type=_positive, default=None)
    v.add_argument("--sabotage", action="store_true",
                   help="kqk only: disable the rule keeping the queen down while the "
                        "king is two ranks below (mutation check)")
    output_flags(v)

    r = sub.add_parser("refute", help="solve the king and rook belief game")
    r.add_argument("scenario", choices=("krk",))
    r.add_argument("--budget", type=_positive, default=None, help="maximum stored states")
    r.add_argument("--no-families", dest="families", action="store_false",
                   help="skip the lemma state families")
    r.add_argument("--export", metavar="PATH", help="write every solved state, one per line")
    output_flags(r)

    c = sub.add_parser("check", help="enumeration checks")
    c.add_argument("what", choices=("one-move",))
    output_flags(c)

    o = sub.add_parser("oracle", help="exact value of a small belief game")
    o.add_argument("--scenario", choices=("KvK", "KQvK", "KRvK", "KRRvK"), default="KQvK")
    o.add_argument("-n", "--board-side", type=int, default=4, dest="n")
    src = o.add_mutually_exclusive_group()
    src.add_argument("--position", help='true position, e.g. "Ka1 Qb2 kd4 w"')
    src.add_argument("--state", help='knowledge state, e.g. "WKa1 WQb2 w B=c3,d4"')
    o.add_argument("--depth", type=_positive, default=None, help="depth budget in plies")
    o.add_argument("--cross-check", type=int, default=0, metavar="COUNT",
                   help="instead compare against the attractor solver on COUNT random states")
    o.add_argument("--seed", type=int, default=1)
    output_flags(o)

    pl = sub.add_parser("play", help="play one side against the program in the fog")
    pl.add_argument("--human", choices=("white", "black"), default="black")
    pl.add_argument("--scenario", choices=("kqk", "krrk"), default="kqk")
    pl.add_argument("--start", help="starting position (White to move unless given)")
    pl.add_argument("--seed", type=int, default=None)

    rp = sub.add_parser("report", help="re-render stored structured reports")
    rp.add_argument("path")
    rp.add_argument("--format", choices=("text", "structured"), default="text")
    return p


# -- output ---------------------------------------------------------------------------

def _emit(args, doc: dict, text: str) -> None:
    line = json.dumps(doc, sort_keys=True)
    if getattr(args, "output", None):
        with open(args.output, "a") as fh:
            fh.write(line + "\n")
    print(line if args.format == "structured" else text)


def render_document(doc: dict) -> tuple[str, bool]:
    """Text form of a stored report and whether it passed."""
    kind = doc.get("kind")
    if kind == "verification":
        from .verifier import VerificationReport
        rep = VerificationReport.from_dict(doc)
        return rep.to_text(), rep.passed if not doc.get("expectFailure") else not rep.passed
    if kind == "refutation":
        lines = [f"states stored   {doc['states']}",
                 f"witness checks  {'pass' if doc['witnessOk'] else 'FAIL'}"]
        for name, (safe, total) in doc["families"].items():
            lines.append(f"{name:<12} {safe}/{total} BlackSafe")
        return "\n".join(lines), bool(doc["passed"])
    if kind == "one-move":
        bad = doc["counterexamples"]
        text = f"placements checked {doc['checked']}\ncounterexamples    {len(bad)}"
        text += "".join(f"\n  {b}" for b in bad[:20])
        return text, not bad
    if kind == "oracle":
        depth = "" if doc["optimalDepth"] is None else f" in {doc['optimalDepth']} plies"
        return f"{doc['state']}: {doc['value']}{depth} ({doc['statesExpanded']} states)", True
    if kind == "cross-check":
        text = (f"{doc['scenario']} n={doc['n']}: {doc['agree']}/{doc['instances']} agree"
                + "".join(f"\n  {d}" for d in doc["disagreements"][:20]))
        return text, doc["agree"] == doc["instances"]
    raise ValueError(f"unknown report kind {kind!r}")


# -- subcommands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verifier import enumerate_initial_configs, run_verification
    if args.sabotage and args.scenario != "kqk":
        raise ValueError("--sabotage applies to kqk only")
    positions = enumerate_initial_configs(args.scenario, args.symmetry)
    if args.sample > 1:
        positions = (p for i, p in enumerate(positions) if i % args.sample == 0)
    options = {"sabotage_queen_up": True} if args.sabotage else {}
    report = run_verification(args.scenario, positions,
                              ply_bound=args.ply_bound or _env_int("FOGEND_PLY_BOUND"),
                              workers=args.workers or _env_int("FOGEND_WORKERS"), **options)
    doc = {"kind": "verification", **json.loads(report.to_json())}
    if args.sabotage:
        doc["expectFailure"] = True
    text, ok = render_document(doc)
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_refute(args) -> int:
    from .refuter import refute_krk
    budget = args.budget or _env_int("FOGEND_STATE_BUDGET")
    summary, solver = refute_krk(budget, families=args.families)
    if args.export:
        with open(args.export, "w") as fh:
            for line in solver.export_lines():
                fh.write(line + "\n")
    doc = {"kind": "refutation", "states": summary.states_stored,
           "families": summary.families, "witnessOk": not summary.witness_problems,
           "witnessProblems": summary.witness_problems[:50], "passed": summary.passed}
    _emit(args, doc, summary.to_text())
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_check(args) -> int:
    from .refuter import no_immediate_win_check, one_move_placements
    bad = no_immediate_win_check()
    doc = {"kind": "one-move", "checked": one_move_placements(), "counterexamples": bad}
    _emit(args, doc, render_document(doc)[0])
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_oracle(args) -> int:
    from .oracle import cross_check, parse_state, solve_generic
    depth = args.depth or _env_int("FOGEND_DEPTH_BUDGET")
    if args.cross_check:
        result = cross_check(args.scenario, args.n, args.cross_check, args.seed, depth)
        doc = {"kind": "cross-check", **result}
        _emit(args, doc, render_document(doc)[0])
        return EXIT_OK if result["agree"] == result["instances"] else EXIT_FAIL
    if args.position:
        initial = parse_position(args.position, args.n)
        label = args.position
    elif args.state:
        initial = parse_state(args.state, args.scenario, args.n)
        label = args.state
    else:
        raise ValueError("oracle needs --position, --state or --cross-check")
    res = solve_generic(args.scenario, args.n, initial, depth)
    doc = {"kind": "oracle", "state": label, "value": res.value,
           "optimalDepth": res.optimalDepth, "statesExpanded": res.statesExpanded}
    _emit(args, doc, render_document(doc)[0])
    return EXIT_OK


def cmd_report(args) -> int:
    ok = True
    with open(args.path) as fh:
        for raw in fh:
            if not raw.strip():
                continue
            doc = json.loads(raw)
            text, passed = render_document(doc)
            ok &= passed
            print(json.dumps(doc, sort_keys=True) if args.format == "structured" else text)
    return EXIT_OK if ok else EXIT_FAIL


# -- interactive play ---------------------------------------------------------------------

def render_view(position: Position, side: str) -> str:
    """Board as ``side`` observes it: pieces on visible squares, ``.`` for
    visible empty squares and ``#`` for fog."""
    vis = visible_squares(position, side)
    n = position.n
    rows = []
    for y in range(n - 1, -1, -1):
        cells = []
        for x in range(n):
            sq = square(x, y)
            if not vis >> sq & 1:
                cells.append("#")
                continue
            piece = position.piece_at(sq)
            if piece is None:
                cells.append(".")
            else:
                color, kind = piece
                cells.append(kind if color == WHITE else kind.lower())
        rows.append(f"{y + 1} " + " ".join(cells))
    rows.append("  " + " ".join("abcdefgh"[:n]))
    return "\n".join(rows)


def _black_reply(position: Position, rng: random.Random) -> Move:
    """Program's Black king: capture the White king or an unguarded piece when
    visible, otherwise step to a square White cannot hit."""
    moves = legal_moves(position)
    vis = visible_squares(position, BLACK)
    guarded = attacked_squares(position, WHITE)
    for m in moves:
        if m.dst == position.white_king:
            return m
    for m in moves:
        if position.piece_at(m.dst) and not guarded >> m.dst & 1 and vis >> m.dst & 1:
            return m
    safe = [m for m in moves if not guarded >> m.dst & 1 and not position.piece_at(m.dst)]
    return rng.choice(safe or moves)


def play(human: str, scenario: str, start: Optional[str], seed: Optional[int] = None,
         inp: TextIO = sys.stdin, out: TextIO = sys.stdout) -> int:
    from .belief import Army, black_branches, white_branches
    from .verifier import make_strategy
    default = {"kqk": "Ka1 Qa2 kh8 w", "krrk": "Ka1 Ra2 Rb1 kh8 w"}[scenario]
    position = parse_position(start or default)
    strategy = make_strategy(scenario)
    state = strategy.initial_state(position)
    mask = 1 << position.black_king
    rng = random.Random(seed)
    me = WHITE if human == "white" else BLACK

    def pick(branches, truth):
        for _, m, _, a in branches:
            if m >> truth & 1:
                return m, a
        raise AssertionError("true king square outside every branch")

    while True:
        if position.side_to_move == me:
            print(render_view(position, me), file=out)
            print(f"{'White' if me == WHITE else 'Black'} to move (e.g. e2e3, q to quit):", file=out)
            line = inp.readline()
            if not line or line.strip() == "q":
                return EXIT_OK
            try:
                move = Move.parse(line, position.n)
                if move not in legal_moves(position):
                    raise PositionError(f"illegal move {line.strip()}")
            except PositionError as e:
                print(e, file=out)
                continue
        elif me == BLACK:
            try:
                move, state, _ = strategy.next_move(state, Army.from_position(position), mask)
            except StrategyError:
                move = legal_moves(position)[0]
        else:
            move = _black_reply(position, rng)
        mover = position.side_to_move
        army = Army.from_position(position)
        nxt, status = apply_move(position, move)
        if status is not GameStatus.ONGOING:
            who = "White" if status is GameStatus.WHITE_WON else "Black"
            print(f"{square_name(move.src)}{square_name(move.dst)}: {who} captures the king.", file=out)
            return EXIT_OK
        if mover == WHITE:
            mask, _ = pick(white_branches(position.n, army, move, mask), nxt.black_king)
            if me == BLACK:
                print("White moved.", file=out)
        else:
            mask, _ = pick(black_branches(position.n, army, mask), nxt.black_king)
            if me == WHITE:
                print("Black moved.", file=out)
        position = nxt


def cmd_play(args) -> int:
    start = args.start
    if start is not None:
        parse_position(start)
    return play(args.human, args.scenario, start, args.seed)


COMMANDS = {"verify": cmd_verify, "refute": cmd_refute, "check": cmd_check,
            "oracle": cmd_oracle, "play": cmd_play, "report": cmd_report}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ResourceError as e:
        print(f"resource error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (PositionError, ValueError) as e:
        print(f"fogend: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
