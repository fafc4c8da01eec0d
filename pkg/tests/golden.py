"""Printed matrices used as frozen oracles."""
from resforge.matrix import PolyMatrix


def split_dnn1_4(reg):
    """The three displayed matrices for (1,4,4,1), split variant."""
    b = reg.b
    P = b(1, 2) * b(3, 4) - b(1, 3) * b(2, 4) + b(1, 4) * b(2, 3)
    d1 = PolyMatrix(reg, [[b(2, 3), -b(1, 3), b(1, 2), 0]])
    d2 = PolyMatrix(reg, [
        [0, -b(1, 2), -b(1, 3), 0],
        [b(1, 2), 0, -b(2, 3), 0],
        [b(1, 3), b(2, 3), 0, 0],
        [b(1, 4), b(2, 4), b(3, 4), 1],
    ])
    d3 = PolyMatrix(reg, [[-b(2, 3)], [b(1, 3)], [-b(1, 2)], [P]])
    return d1, d2, d3


def split_d4m_2(reg):
    """The displayed generators and maps for (1,4,5,2), split variant."""
    def B(i, j, k):
        return reg.b(i, j, k)
    c = reg.c(1, 2)
    J = [B(1, 3, 1) * B(1, 2, 2) - B(1, 3, 2) * B(1, 2, 1),
         B(1, 2, 1) * B(2, 3, 2) - B(1, 2, 2) * B(2, 3, 1),
         B(2, 3, 1) * B(1, 3, 2) - B(2, 3, 2) * B(1, 3, 1),
         c]
    d2 = [
        [B(1, 4, 1) * B(2, 3, 2) - B(1, 4, 2) * B(2, 3, 1) + c, B(2, 4, 1) * B(2, 3, 2) - B(2, 4, 2) * B(2, 3, 1),
         B(3, 4, 1) * B(2, 3, 2) - B(3, 4, 2) * B(2, 3, 1), B(2, 3, 2), -B(2, 3, 1)],
        [B(1, 4, 1) * B(1, 3, 2) - B(1, 4, 2) * B(1, 3, 1), B(2, 4, 1) * B(1, 3, 2) - B(2, 4, 2) * B(1, 3, 1) + c,
         B(3, 4, 1) * B(1, 3, 2) - B(3, 4, 2) * B(1, 3, 1), -B(1, 3, 2), B(1, 3, 1)],
        [B(1, 4, 1) * B(1, 2, 2) - B(1, 4, 2) * B(1, 2, 1), B(2, 4, 1) * B(1, 2, 2) - B(2, 4, 2) * B(1, 2, 1),
         B(3, 4, 1) * B(1, 2, 2) - B(3, 4, 2) * B(1, 2, 1) + c, B(1, 2, 2), -B(1, 2, 1)],
        [B(1, 2, 1) * B(1, 3, 2) - B(1, 2, 2) * B(1, 3, 1), B(2, 3, 1) * B(1, 2, 2) - B(2, 3, 2) * B(1, 2, 1),
         B(1, 3, 1) * B(2, 3, 2) - B(1, 3, 2) * B(2, 3, 1), 0, 0],
    ]
    d3 = [
        [-B(2, 3, 1), -B(2, 3, 2)],
        [B(1, 3, 1), B(1, 3, 2)],
        [-B(1, 2, 1), -B(1, 2, 2)],
        [B(1, 2, 1) * B(3, 4, 1) - B(1, 3, 1) * B(2, 4, 1) + B(1, 4, 1) * B(2, 3, 1),
         B(1, 2, 2) * B(3, 4, 1) - B(1, 3, 2) * B(2, 4, 1) + B(2, 3, 2) * B(1, 4, 1) + c],
        [B(1, 2, 1) * B(3, 4, 2) - B(1, 3, 1) * B(2, 4, 2) + B(2, 3, 1) * B(1, 4, 2) - c,
         B(1, 2, 2) * B(3, 4, 2) - B(1, 3, 2) * B(2, 4, 2) + B(1, 4, 2) * B(2, 3, 2)],
    ]
    return PolyMatrix(reg, [J]), PolyMatrix(reg, d2), PolyMatrix(reg, d3)


def hilbert_burch_example(reg):
    """The 4×3 matrix over x, y, v, w, a, b, c and its expected ideal (Z appended)."""
    x, y, v, w, a, b, c = reg.free(*"xyvwabc")
    M = PolyMatrix(reg, [[x, 0, 0], [0, y, 0], [v, 0, w], [a, b, c]])
    return M
