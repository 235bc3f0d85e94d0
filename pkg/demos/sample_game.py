"""Play one KQvK game against a random defender, printing White's move and
the size of White's belief about the hidden king after every ply."""
import random

from fogend.belief import Army, black_branches, white_branches
from fogend.board import GameStatus, apply_move, attacked_squares, legal_moves, parse_position
from fogend.cli import render_view
from fogend.kqk import KqkStrategy


def main(seed=4):
    rng = random.Random(seed)
    strategy = KqkStrategy()
    p = parse_position("Kd4 Qe6 ka8 w")
    state = strategy.initial_state(p)
    mask = 1 << p.black_king
    status = GameStatus.ONGOING
    ply = 0
    while status is GameStatus.ONGOING:
        army = Army.from_position(p)
        if p.side_to_move == "w":
            move, state, _ = strategy.next_move(state, army, mask)
            branches = white_branches(p.n, army, move, mask)
        else:
            options = legal_moves(p)
            hit = attacked_squares(p, "w")
            move = rng.choice([m for m in options if not hit >> m.dst & 1] or options)
            branches = black_branches(p.n, army, mask)
        side = p.side_to_move
        p, status = apply_move(p, move)
        ply += 1
        if status is GameStatus.ONGOING:
            mask = next(m for _, m, _, _ in branches if m >> p.black_king & 1)
        if side == "w":
            print(f"{ply:3d} {move}  belief={bin(mask).count('1')}")
    print(render_view(p, "w"))
    print(status.name)


if __name__ == "__main__":
    main()
