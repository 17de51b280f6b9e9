"""Jitted inner loops for the divide and merge steps.

Semantics are pinned by the trace tests: round-robin order, one pop per
live queue per round, up/down/left/right scan order, symmetric vote
increments, undecided contacts resolved after the queues drain. The
kernels mutate the arrays they are handed; callers own copying.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Edge states: 0 = at least one side empty, 1 = connected, 2 = occupied
# both sides but not connected.


@njit(cache=True)
def expand_kernel(ed, er, lab, seeds, rows, cols, wrap, vp, vm, und):
    """Round-robin label expansion over flat arrays.

    ed/er: uint8 edge states for down/right adjacencies (stored at the
    upper/left pixel). lab: int32 flat label image (zeros on entry).
    seeds: int64 flat pixel indices, label i+1 for seeds[i]. vp/vm: vote
    matrices. und: preallocated (k, 2) buffer for undecided contacts.
    Returns (undecided contacts, plus increments, minus increments);
    the increment counts equal the final matrix totals.
    """
    size = rows * cols
    last_row_start = size - cols
    m = seeds.size

    nxt = np.full(size, -1, np.int64)  # intrusive queue links
    head = np.empty(m, np.int64)
    tail = np.empty(m, np.int64)
    live = np.empty(m, np.int64)
    live_next = np.empty(m, np.int64)
    for i in range(m):
        s = seeds[i]
        lab[s] = i + 1
        head[i] = s
        tail[i] = s
        live[i] = i
    n_live = m
    n_und = 0
    n_plus = 0
    n_minus = 0

    while n_live > 0:
        n_next = 0
        for k in range(n_live):
            qi = live[k]
            idx = head[qi]
            head[qi] = nxt[idx]
            li = lab[idx]
            c = idx % cols

            # up: pair (r-1,c)-(r,c) stored at the upper pixel
            if idx >= cols:
                n = idx - cols
                e = ed[n]
                if e != 0:
                    ln = lab[n]
                    if e == 1:
                        if ln == 0:
                            lab[n] = li
                            if head[qi] == -1:
                                head[qi] = n
                            else:
                                nxt[tail[qi]] = n
                            tail[qi] = n
                            nxt[n] = -1
                        elif ln != li:
                            vp[li - 1, ln - 1] += 1
                            vp[ln - 1, li - 1] += 1
                            n_plus += 2
                    elif ln == 0:
                        und[n_und, 0] = idx
                        und[n_und, 1] = n
                        n_und += 1
                    elif ln != li:
                        vm[li - 1, ln - 1] += 1
                        vm[ln - 1, li - 1] += 1
                        n_minus += 2
            # down
            if idx < last_row_start:
                n = idx + cols
                e = ed[idx]
                if e != 0:
                    ln = lab[n]
                    if e == 1:
                        if ln == 0:
                            lab[n] = li
                            if head[qi] == -1:
                                head[qi] = n
                            else:
                                nxt[tail[qi]] = n
                            tail[qi] = n
                            nxt[n] = -1
                        elif ln != li:
                            vp[li - 1, ln - 1] += 1
                            vp[ln - 1, li - 1] += 1
                            n_plus += 2
                    elif ln == 0:
                        und[n_und, 0] = idx
                        und[n_und, 1] = n
                        n_und += 1
                    elif ln != li:
                        vm[li - 1, ln - 1] += 1
                        vm[ln - 1, li - 1] += 1
                        n_minus += 2
            # left: pair (r,c-1)-(r,c) stored at the left pixel
            if c > 0:
                n = idx - 1
            elif wrap:
                n = idx + cols - 1
            else:
                n = -1
            if n >= 0:
                e = er[n]
                if e != 0:
                    ln = lab[n]
                    if e == 1:
                        if ln == 0:
                            lab[n] = li
                            if head[qi] == -1:
                                head[qi] = n
                            else:
                                nxt[tail[qi]] = n
                            tail[qi] = n
                            nxt[n] = -1
                        elif ln != li:
                            vp[li - 1, ln - 1] += 1
                            vp[ln - 1, li - 1] += 1
                            n_plus += 2
                    elif ln == 0:
                        und[n_und, 0] = idx
                        und[n_und, 1] = n
                        n_und += 1
                    elif ln != li:
                        vm[li - 1, ln - 1] += 1
                        vm[ln - 1, li - 1] += 1
                        n_minus += 2
            # right
            if c < cols - 1:
                n = idx + 1
            elif wrap:
                n = idx - cols + 1
            else:
                n = -1
            if n >= 0:
                e = er[idx]
                if e != 0:
                    ln = lab[n]
                    if e == 1:
                        if ln == 0:
                            lab[n] = li
                            if head[qi] == -1:
                                head[qi] = n
                            else:
                                nxt[tail[qi]] = n
                            tail[qi] = n
                            nxt[n] = -1
                        elif ln != li:
                            vp[li - 1, ln - 1] += 1
                            vp[ln - 1, li - 1] += 1
                            n_plus += 2
                    elif ln == 0:
                        und[n_und, 0] = idx
                        und[n_und, 1] = n
                        n_und += 1
                    elif ln != li:
                        vm[li - 1, ln - 1] += 1
                        vm[ln - 1, li - 1] += 1
                        n_minus += 2

            if head[qi] != -1:
                live_next[n_next] = qi
                n_next += 1
        live, live_next = live_next, live
        n_live = n_next

    # undecided contacts vote against only when the neighbor ended up
    # carrying a different label
    for t in range(n_und):
        a = und[t, 0]
        b = und[t, 1]
        la = lab[a]
        lb = lab[b]
        if lb != 0 and lb != la:
            vm[la - 1, lb - 1] += 1
            vm[lb - 1, la - 1] += 1
            n_minus += 2
    return n_und, n_plus, n_minus


@njit(cache=True)
def merge_kernel(vp, vm, mapping):
    """Vote walk over label pairs; mutates vp/vm (fold) and mapping.

    Returns (n_instances, vote_evals, row_folds).
    """
    m = mapping.size
    open_ = np.ones(m, np.bool_)
    queue = np.empty(m, np.int64)
    current = 0
    vote_evals = 0
    row_folds = 0
    cursor = 0

    while True:
        while cursor < m and not open_[cursor]:
            cursor += 1
        if cursor == m:
            break
        current += 1
        qh = 0
        qt = 0
        queue[qt] = cursor
        qt += 1
        open_[cursor] = False
        mapping[cursor] = current

        while qh < qt:
            target = queue[qh]
            qh += 1
            for q in range(m):
                if open_[q]:
                    vote_evals += 1
                    if vp[target, q] > vm[target, q]:
                        queue[qt] = q
                        qt += 1
                        open_[q] = False
                        mapping[q] = current
                        for i in range(m):
                            vp[q, i] += vp[target, i]
                            vm[q, i] += vm[target, i]
                        row_folds += 1

    return current, vote_evals, row_folds
