"""Random games with the true Black king tracked against White's belief."""
import random

from fogend.belief import Army, black_branches, white_branches
from fogend.board import GameStatus, Position, apply_move, attacked_squares, legal_moves

MATERIAL = {"KQvK": (1, 0), "KRvK": (0, 1), "KRRvK": (0, 2)}


def random_start(rng, scenario, n=8):
    queens, rooks = MATERIAL[scenario]
    squares = [x + 8 * y for x in range(n) for y in range(n)]
    picked = rng.sample(squares, 2 + queens + rooks)
    q = picked[2] if queens else None
    return Position(picked[0], picked[1], q, tuple(picked[2 + queens:]), "w", n)


def playout(rng, scenario, plies=16, n=8):
    """Play random legal moves; return the number of belief updates where
    the true king square fell outside the belief (0 when sound)."""
    position = random_start(rng, scenario, n)
    mask = 1 << position.black_king
    violations = 0
    for _ in range(plies):
        move = rng.choice(legal_moves(position))
        army = Army.from_position(position)
        nxt, status = apply_move(position, move)
        if status is not GameStatus.ONGOING:
            break
        if position.side_to_move == "w":
            branches = white_branches(n, army, move, mask)
        else:
            branches = black_branches(n, army, mask)
        hits = [m for _, m, _, a in branches if m >> nxt.black_king & 1
                and a == Army.from_position(nxt)]
        if len(hits) != 1:
            violations += 1
            break
        mask = hits[0]
        position = nxt
    return violations


def run_playouts(count, seed=0, plies=16):
    rng = random.Random(seed)
    scenarios = list(MATERIAL)
    return sum(playout(rng, scenarios[i % 3], plies) for i in range(count))


def strategy_game(strategy, position, rng, max_plies=400):
    """Play ``strategy`` for White against a random Black king that never
    steps onto a square White can take.  Returns the final status."""
    state = strategy.initial_state(position)
    mask = 1 << position.black_king
    n = position.n
    for _ in range(max_plies):
        army = Army.from_position(position)
        if position.side_to_move == "w":
            move, state, _ = strategy.next_move(state, army, mask)
            assert move in legal_moves(position), (str(position), str(move))
        else:
            options = legal_moves(position)
            hit = attacked_squares(position, "w")
            move = rng.choice([m for m in options if not hit >> m.dst & 1] or options)
        nxt, status = apply_move(position, move)
        if status is not GameStatus.ONGOING:
            return status
        if position.side_to_move == "w":
            branches = white_branches(n, army, move, mask)
        else:
            branches = black_branches(n, army, mask)
        mask = next(m for _, m, _, _ in branches if m >> nxt.black_king & 1)
        position = nxt
    return GameStatus.ONGOING
