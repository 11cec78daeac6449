"""Pure-Python span-assembly kernel.

Reference implementation of the group-growing walk; ``_kernel.pyx`` is the
compiled twin over the same encoded buffers and must produce identical
output (enforced by the equivalence tests).
"""

from __future__ import annotations

import sys


def extract_spans(n, root, child_start, child_list, can_absorb, is_head, emit_nested):
    """Assemble group spans over an encoded tree.

    Arguments are the buffers produced by ``extractor.encode_tree`` plus the
    nested-emission flag. Returns ``(head, start, end)`` triples sorted by
    ``(start, end, head)``.
    """
    if n <= 0:
        return []
    if n + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(n + 200)

    out = []
    lstack = []  # rejected children pending independent traversal

    def grow(x):
        s = e = x
        a, b = child_start[x], child_start[x + 1]
        k = a
        while k < b and child_list[k] < x:
            k += 1
        blocked = False
        for i in range(k - 1, a - 1, -1):  # left side, nearest child first
            c = child_list[i]
            if blocked:
                lstack.append(c)
                continue
            lsnap, osnap = len(lstack), len(out)
            cs, ce = grow(c)
            if can_absorb[c] and ce == s - 1:
                s = cs
                if emit_nested and is_head[c]:
                    out.append((c, cs, ce))
            else:
                del lstack[lsnap:]
                del out[osnap:]
                lstack.append(c)
                blocked = True
        blocked = False
        for i in range(k, b):  # right side, nearest child first
            c = child_list[i]
            if blocked:
                lstack.append(c)
                continue
            lsnap, osnap = len(lstack), len(out)
            cs, ce = grow(c)
            if can_absorb[c] and cs == e + 1:
                e = ce
                if emit_nested and is_head[c]:
                    out.append((c, cs, ce))
            else:
                del lstack[lsnap:]
                del out[osnap:]
                lstack.append(c)
                blocked = True
        return s, e

    pending = [root]
    while pending:
        x = pending.pop()
        if is_head[x]:
            base = len(lstack)
            s, e = grow(x)
            out.append((x, s, e))
            pending.extend(lstack[base:])
            del lstack[base:]
        else:
            a, b = child_start[x], child_start[x + 1]
            pending.extend(child_list[a:b])
    out.sort(key=lambda t: (t[1], t[2], t[0]))
    return out
