# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled span-assembly kernel; semantics identical to ``_kernel_py``."""

from libc.stdlib cimport free, malloc


cdef struct Ctx:
    const int* child_start
    const int* child_list
    const unsigned char* can_absorb
    const unsigned char* is_head
    bint emit_nested
    int* lstack
    int ltop
    int* out_h
    int* out_s
    int* out_e
    int otop


cdef void _grow(Ctx* ctx, int x, int* s_out, int* e_out) noexcept:
    cdef int s = x
    cdef int e = x
    cdef int a = ctx.child_start[x]
    cdef int b = ctx.child_start[x + 1]
    cdef int k = a
    cdef int i, c, cs, ce, lsnap, osnap
    cdef bint blocked = False
    while k < b and ctx.child_list[k] < x:
        k += 1
    i = k - 1
    while i >= a:  # left side, nearest child first
        c = ctx.child_list[i]
        if blocked:
            ctx.lstack[ctx.ltop] = c
            ctx.ltop += 1
        else:
            lsnap = ctx.ltop
            osnap = ctx.otop
            _grow(ctx, c, &cs, &ce)
            if ctx.can_absorb[c] and ce == s - 1:
                s = cs
                if ctx.emit_nested and ctx.is_head[c]:
                    ctx.out_h[ctx.otop] = c
                    ctx.out_s[ctx.otop] = cs
                    ctx.out_e[ctx.otop] = ce
                    ctx.otop += 1
            else:
                ctx.ltop = lsnap
                ctx.otop = osnap
                ctx.lstack[ctx.ltop] = c
                ctx.ltop += 1
                blocked = True
        i -= 1
    blocked = False
    i = k
    while i < b:  # right side, nearest child first
        c = ctx.child_list[i]
        if blocked:
            ctx.lstack[ctx.ltop] = c
            ctx.ltop += 1
        else:
            lsnap = ctx.ltop
            osnap = ctx.otop
            _grow(ctx, c, &cs, &ce)
            if ctx.can_absorb[c] and cs == e + 1:
                e = ce
                if ctx.emit_nested and ctx.is_head[c]:
                    ctx.out_h[ctx.otop] = c
                    ctx.out_s[ctx.otop] = cs
                    ctx.out_e[ctx.otop] = ce
                    ctx.otop += 1
            else:
                ctx.ltop = lsnap
                ctx.otop = osnap
                ctx.lstack[ctx.ltop] = c
                ctx.ltop += 1
                blocked = True
        i += 1
    s_out[0] = s
    e_out[0] = e


def extract_spans(int n, int root, child_start, child_list, can_absorb, is_head,
                  bint emit_nested):
    """Same contract as ``_kernel_py.extract_spans``."""
    if n <= 0:
        return []
    cdef const int[:] cs_mv = child_start
    cdef const int[:] cl_mv = child_list
    cdef const unsigned char[:] ca_mv = can_absorb
    cdef const unsigned char[:] ih_mv = is_head

    cdef Ctx ctx
    ctx.child_start = &cs_mv[0]
    ctx.child_list = &cl_mv[0]
    ctx.can_absorb = &ca_mv[0]
    ctx.is_head = &ih_mv[0]
    ctx.emit_nested = emit_nested
    ctx.ltop = 0
    ctx.otop = 0

    cdef int cap = n + 1
    cdef int* buf = <int*> malloc(sizeof(int) * cap * 5)
    if buf == NULL:
        raise MemoryError()
    ctx.lstack = buf
    ctx.out_h = buf + cap
    ctx.out_s = buf + 2 * cap
    ctx.out_e = buf + 3 * cap
    cdef int* pending = buf + 4 * cap

    cdef int ptop = 0, x, base, s, e, i, a, b
    pending[ptop] = root
    ptop += 1
    try:
        while ptop > 0:
            ptop -= 1
            x = pending[ptop]
            if ctx.is_head[x]:
                base = ctx.ltop
                _grow(&ctx, x, &s, &e)
                ctx.out_h[ctx.otop] = x
                ctx.out_s[ctx.otop] = s
                ctx.out_e[ctx.otop] = e
                ctx.otop += 1
                i = base
                while i < ctx.ltop:
                    pending[ptop] = ctx.lstack[i]
                    ptop += 1
                    i += 1
                ctx.ltop = base
            else:
                a = ctx.child_start[x]
                b = ctx.child_start[x + 1]
                i = a
                while i < b:
                    pending[ptop] = ctx.child_list[i]
                    ptop += 1
                    i += 1
        result = [
            (ctx.out_h[i], ctx.out_s[i], ctx.out_e[i]) for i in range(ctx.otop)
        ]
    finally:
        free(buf)
    result.sort(key=lambda t: (t[1], t[2], t[0]))
    return result
