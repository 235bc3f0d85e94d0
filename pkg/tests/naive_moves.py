"""A deliberately plain move generator on (file, rank) pairs, used as an
independent reference for the bitboard engine."""
import itertools

KING_STEPS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if dx or dy]
ROOK_DIRS = [(1, 0), (-1, 0), (0, 1), (0, -1)]
QUEEN_DIRS = ROOK_DIRS + [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def board_dict(position):
    """{(x, y): (color, kind)}"""
    out = {}
    for color, kind, sq in position.pieces():
        out[(sq % 8, sq // 8)] = (color, kind)
    return out


def moves(board, side, n):
    """List of ((x, y), (x, y)) moves for ``side``; a king may be captured."""
    out = []
    for (x, y), (color, kind) in board.items():
        if color != side:
            continue
        if kind == "K":
            for dx, dy in KING_STEPS:
                tx, ty = x + dx, y + dy
                if 0 <= tx < n and 0 <= ty < n and board.get((tx, ty), (None,))[0] != side:
                    out.append(((x, y), (tx, ty)))
            continue
        for dx, dy in (QUEEN_DIRS if kind == "Q" else ROOK_DIRS):
            tx, ty = x + dx, y + dy
            while 0 <= tx < n and 0 <= ty < n:
                other = board.get((tx, ty))
                if other is None:
                    out.append(((x, y), (tx, ty)))
                else:
                    if other[0] != side:
                        out.append(((x, y), (tx, ty)))
                    break
                tx, ty = tx + dx, ty + dy
    return out


def play(board, move):
    """New board and whether a king was captured."""
    src, dst = move
    b = dict(board)
    captured = b.get(dst)
    b[dst] = b.pop(src)
    return b, captured is not None and captured[1] == "K"


def perft(board, side, n, depth):
    if depth == 0:
        return 1
    total = 0
    other = "b" if side == "w" else "w"
    for m in moves(board, side, n):
        b, king_taken = play(board, m)
        total += 1 if king_taken else perft(b, other, n, depth - 1)
    return total


def ring(king):
    x0, y0 = king % 8, king // 8
    return [x + 8 * y for x in range(x0 - 1, x0 + 2) for y in range(y0 - 1, y0 + 2)
            if 0 <= x < 8 and 0 <= y < 8 and (x, y) != (x0, y0)]


def queen_targets(q, king):
    """Queen destinations with the own king as the only blocker."""
    out = []
    x0, y0 = q % 8, q // 8
    for dx, dy in itertools.product((-1, 0, 1), repeat=2):
        if not dx and not dy:
            continue
        x, y = x0 + dx, y0 + dy
        while 0 <= x < 8 and 0 <= y < 8 and x + 8 * y != king:
            out.append(x + 8 * y)
            x, y = x + dx, y + dy
    return out


def ring_distance(king, q, target):
    """Fewest queen moves from q to target visiting only squares next to the king."""
    adjacent = set(ring(king))
    frontier, seen, d = {q}, {q}, 0
    while frontier:
        if target in frontier:
            return d
        frontier = {t for s in frontier for t in queen_targets(s, king) if t in adjacent} - seen
        seen |= frontier
        d += 1
    return None
