"""Compiled run engine: same variant semantics as the reference engine.

The kernels operate on flat arrays (bit arrays plus packed mirrors, per-level
zero-counts, CSR reverse index) and are seeded explicitly at entry, so runs
are deterministic regardless of scheduling. ``nogil`` lets a thread pool run
independent seeds in parallel.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .seeds import substream_u32

FIT_ONEMAX, FIT_LINEAR, FIT_HT = 0, 1, 2
MUT_STD, MUT_ONE, MUT_ALIAS, MUT_POISSON = 0, 1, 2, 3
ALGO_PLUS, ALGO_TWO_PHASE = 0, 1

_LUT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


@njit(cache=True, nogil=True, inline="always")
def _draw_s(mut_kind, n, mut_c, alias_j, alias_q, alias_off, pois_c):
    if mut_kind == MUT_ONE:
        return 1
    if mut_kind == MUT_STD:
        return np.random.binomial(n, mut_c / n)
    if mut_kind == MUT_ALIAS:
        while True:
            i = np.random.randint(0, alias_j.shape[0])
            s = i if np.random.random() < alias_q[i] else alias_j[i]
            s += alias_off
            if s <= n:
                return s
    s = np.random.poisson(pois_c)
    while s > n:
        s = np.random.poisson(pois_c)
    return s


@njit(cache=True, nogil=True, inline="always")
def _draw_positions(n, s, perm, swaps, pos):
    for k in range(s):
        r = k + np.random.randint(0, n - k)
        swaps[k] = r
        t = perm[k]
        perm[k] = perm[r]
        perm[r] = t
        pos[k] = perm[k]
    for k in range(s - 1, -1, -1):
        r = swaps[k]
        t = perm[k]
        perm[k] = perm[r]
        perm[r] = t


@njit(cache=True, nogil=True)
def _ht_eval(pos, s, x, xp, z, ztmp, zstamp, gen, lvl, ones, ones_a,
             a_masks, b_indptr, b_data, big_l, thr, n):
    """Value and state of the point obtained by flipping pos[0:s]; x untouched."""
    crossed = False
    dones = 0
    for k in range(s):
        p = pos[k]
        old = x[p]
        dones += 1 - 2 * old
        for idx in range(b_indptr[p], b_indptr[p + 1]):
            lv = b_data[idx]
            if zstamp[lv] != gen:
                zstamp[lv] = gen
                ztmp[lv] = z[lv]
            zo = ztmp[lv]
            zn = zo + (1 if old == 1 else -1)
            ztmp[lv] = zn
            if (zo <= thr) != (zn <= thr):
                crossed = True
    if crossed:
        newlvl = 0
        for i in range(big_l, 0, -1):
            v = ztmp[i] if zstamp[i] == gen else z[i]
            if v <= thr:
                newlvl = i
                break
    else:
        newlvl = lvl
    newones = ones + dones
    if newlvl == lvl and newlvl < big_l:
        row = lvl  # A_{lvl+1} bitmap lives at row lvl
        donesa = 0
        for k in range(s):
            p = pos[k]
            if (a_masks[row, p >> 3] >> (7 - (p & 7))) & 1:
                donesa += 1 - 2 * x[p]
        newonesa = ones_a + donesa
    elif newlvl < big_l:
        for k in range(s):
            p = pos[k]
            xp[p >> 3] ^= np.uint8(1 << (7 - (p & 7)))
        acc = 0
        for t in range(xp.shape[0]):
            acc += _LUT[a_masks[newlvl, t] & xp[t]]
        for k in range(s):
            p = pos[k]
            xp[p >> 3] ^= np.uint8(1 << (7 - (p & 7)))
        newonesa = acc
    else:
        newonesa = 0
    newfit = newlvl * n * n + n * newonesa + (newones - newonesa)
    return newfit, newlvl, newones, newonesa


@njit(cache=True, nogil=True, inline="always")
def _commit_flips(pos, s, x, xp, z, b_indptr, b_data, use_ht):
    for k in range(s):
        p = pos[k]
        old = x[p]
        x[p] = 1 - old
        xp[p >> 3] ^= np.uint8(1 << (7 - (p & 7)))
        if use_ht:
            d = 1 if old == 1 else -1
            for idx in range(b_indptr[p], b_indptr[p + 1]):
                z[b_data[idx]] += d


@njit(cache=True, nogil=True, inline="always")
def _plain_eval(pos, s, x, weights, fit_kind, fit, ones):
    dfit = 0
    dones = 0
    for k in range(s):
        p = pos[k]
        d = 1 - 2 * x[p]
        dones += d
        if fit_kind == FIT_LINEAR:
            dfit += d * weights[p]
        else:
            dfit += d
    return fit + dfit, ones + dones


@njit(cache=True, nogil=True)
def _full_ht_state(xp, z, a_masks, b_masks, big_l, thr, bsize, n, ones):
    for i in range(1, big_l + 1):
        acc = 0
        for t in range(xp.shape[0]):
            acc += _LUT[b_masks[i - 1, t] & xp[t]]
        z[i] = bsize - acc
    lvl = 0
    for i in range(big_l, 0, -1):
        if z[i] <= thr:
            lvl = i
            break
    if lvl < big_l:
        acc = 0
        for t in range(xp.shape[0]):
            acc += _LUT[a_masks[lvl, t] & xp[t]]
        ones_a = acc
    else:
        ones_a = 0
    fit = lvl * n * n + n * ones_a + (ones - ones_a)
    return fit, lvl, ones_a


@njit(cache=True, nogil=True)
def _kernel_single(
    n, budget, seed, sample_every,
    algo, lam0, c0, gamma0, adaptive, adapt_f, lam_max,
    mut_kind, mut_c, alias_j, alias_q, alias_off, pois_c,
    fit_kind, weights,
    big_l, thr, bsize, a_masks, b_masks, b_indptr, b_data,
    out_evals, out_fit, out_ones, out_level,
):
    np.random.seed(seed)
    nbytes = (n + 7) // 8
    x = np.empty(n, np.uint8)
    xp = np.zeros(nbytes, np.uint8)
    ones = 0
    for i in range(n):
        b = 1 if np.random.random() < 0.5 else 0
        x[i] = b
        if b:
            ones += 1
            xp[i >> 3] |= np.uint8(1 << (7 - (i & 7)))
    z = np.zeros(big_l + 1, np.int64)
    ztmp = np.zeros(big_l + 1, np.int64)
    zstamp = np.full(big_l + 1, -1, np.int64)
    gen_id = 0
    lvl = 0
    ones_a = 0
    if fit_kind == FIT_HT:
        fit, lvl, ones_a = _full_ht_state(xp, z, a_masks, b_masks, big_l, thr, bsize, n, ones)
    elif fit_kind == FIT_LINEAR:
        fit = 0
        for i in range(n):
            if x[i]:
                fit += weights[i]
    else:
        fit = ones

    evals = 1
    ns = 0
    next_at = sample_every
    out_evals[ns] = evals
    out_fit[ns] = fit
    out_ones[ns] = ones
    out_level[ns] = lvl
    ns += 1
    while next_at <= evals:
        next_at += sample_every
    events = np.int64(0)
    sum_s10 = np.int64(0)
    sum_s01 = np.int64(0)
    sum_s10sq = np.int64(0)
    if ones == n:
        return ns, 1, evals, events, sum_s10, sum_s01, sum_s10sq

    perm = np.arange(n, dtype=np.int64)
    swaps = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    best_pos = np.empty(n, np.int64)
    ypos = np.empty(n, np.int64)
    zpos = np.empty(n, np.int64)

    lam_f = float(lam0)
    cc = c0
    gg = gamma0
    if adaptive == 1:
        cc = lam_f
        gg = 1.0 / lam_f
    terminated = 0

    while True:
        lam_int = max(1, int(round(lam_f))) if algo == ALGO_TWO_PHASE else lam0
        per_gen = 2 * lam_int if algo == ALGO_TWO_PHASE else lam0
        if evals + per_gen > budget:
            break

        if algo == ALGO_PLUS:
            best_fit = np.int64(-1)
            best_lvl = np.int64(0)
            best_ones = np.int64(0)
            best_onesa = np.int64(0)
            best_s = 0
            ties = 0
            hit_opt = False
            for _j in range(lam0):
                s = _draw_s(mut_kind, n, mut_c, alias_j, alias_q, alias_off, pois_c)
                _draw_positions(n, s, perm, swaps, pos)
                if fit_kind == FIT_HT:
                    gen_id += 1
                    f2, l2, o2, oa2 = _ht_eval(pos, s, x, xp, z, ztmp, zstamp, gen_id,
                                               lvl, ones, ones_a, a_masks, b_indptr,
                                               b_data, big_l, thr, n)
                else:
                    f2, o2 = _plain_eval(pos, s, x, weights, fit_kind, fit, ones)
                    l2 = 0
                    oa2 = 0
                evals += 1
                take = False
                if ties == 0 or f2 > best_fit:
                    take = True
                    ties = 1
                elif f2 == best_fit:
                    ties += 1
                    if np.random.random() < 1.0 / ties:
                        take = True
                if take:
                    best_fit, best_lvl, best_ones, best_onesa, best_s = f2, l2, o2, oa2, s
                    for k in range(s):
                        best_pos[k] = pos[k]
                if o2 == n:
                    hit_opt = True
                    break
            # instrumentation on the winner offspring
            s01 = 0
            for k in range(best_s):
                if x[best_pos[k]] == 0:
                    s01 += 1
            if s01 > 0:
                s10 = best_s - s01
                events += 1
                sum_s10 += s10
                sum_s01 += s01
                sum_s10sq += s10 * s10
            if hit_opt or best_fit >= fit:
                _commit_flips(best_pos, best_s, x, xp, z, b_indptr, b_data, fit_kind == FIT_HT)
                fit, lvl, ones, ones_a = best_fit, best_lvl, best_ones, best_onesa
            if hit_opt:
                terminated = 1
                break
        else:  # two-phase GA
            s = np.random.binomial(n, cc / n)
            best_fit = np.int64(-1)
            best_lvl = np.int64(0)
            best_ones = np.int64(0)
            best_onesa = np.int64(0)
            ties = 0
            hit_opt = False
            for _j in range(lam_int):
                _draw_positions(n, s, perm, swaps, pos)
                if fit_kind == FIT_HT:
                    gen_id += 1
                    f2, l2, o2, oa2 = _ht_eval(pos, s, x, xp, z, ztmp, zstamp, gen_id,
                                               lvl, ones, ones_a, a_masks, b_indptr,
                                               b_data, big_l, thr, n)
                else:
                    f2, o2 = _plain_eval(pos, s, x, weights, fit_kind, fit, ones)
                    l2 = 0
                    oa2 = 0
                evals += 1
                take = False
                if ties == 0 or f2 > best_fit:
                    take = True
                    ties = 1
                elif f2 == best_fit:
                    ties += 1
                    if np.random.random() < 1.0 / ties:
                        take = True
                if take:
                    best_fit, best_lvl, best_ones, best_onesa = f2, l2, o2, oa2
                    for k in range(s):
                        ypos[k] = pos[k]
                if o2 == n:
                    hit_opt = True
                    break
            if hit_opt:
                _commit_flips(ypos, s, x, xp, z, b_indptr, b_data, fit_kind == FIT_HT)
                fit, lvl, ones, ones_a = best_fit, best_lvl, best_ones, best_onesa
                terminated = 1
                break
            # crossover phase: keep each winner flip with probability gamma
            bz_fit = np.int64(-1)
            bz_lvl = np.int64(0)
            bz_ones = np.int64(0)
            bz_onesa = np.int64(0)
            bz_s = 0
            ties = 0
            for _j in range(lam_int):
                zs = 0
                for k in range(s):
                    if np.random.random() < gg:
                        pos[zs] = ypos[k]
                        zs += 1
                if fit_kind == FIT_HT:
                    gen_id += 1
                    f2, l2, o2, oa2 = _ht_eval(pos, zs, x, xp, z, ztmp, zstamp, gen_id,
                                               lvl, ones, ones_a, a_masks, b_indptr,
                                               b_data, big_l, thr, n)
                else:
                    f2, o2 = _plain_eval(pos, zs, x, weights, fit_kind, fit, ones)
                    l2 = 0
                    oa2 = 0
                evals += 1
                take = False
                if ties == 0 or f2 > bz_fit:
                    take = True
                    ties = 1
                elif f2 == bz_fit:
                    ties += 1
                    if np.random.random() < 1.0 / ties:
                        take = True
                if take:
                    bz_fit, bz_lvl, bz_ones, bz_onesa, bz_s = f2, l2, o2, oa2, zs
                    for k in range(zs):
                        zpos[k] = pos[k]
                if o2 == n:
                    hit_opt = True
                    break
            s01 = 0
            for k in range(bz_s):
                if x[zpos[k]] == 0:
                    s01 += 1
            if s01 > 0:
                s10 = bz_s - s01
                events += 1
                sum_s10 += s10
                sum_s01 += s01
                sum_s10sq += s10 * s10
            improved = bz_fit > fit
            if hit_opt or bz_fit >= fit:
                _commit_flips(zpos, bz_s, x, xp, z, b_indptr, b_data, fit_kind == FIT_HT)
                fit, lvl, ones, ones_a = bz_fit, bz_lvl, bz_ones, bz_onesa
            if hit_opt:
                terminated = 1
                break
            if adaptive == 1:
                if improved:
                    lam_f = max(1.0, lam_f / adapt_f)
                else:
                    lam_f = min(lam_max, lam_f * adapt_f**0.25)
                cc = lam_f
                gg = 1.0 / lam_f

        if evals >= next_at:
            if out_evals[ns - 1] < evals:
                out_evals[ns] = evals
                out_fit[ns] = fit
                out_ones[ns] = ones
                out_level[ns] = lvl
                ns += 1
            while next_at <= evals:
                next_at += sample_every

    if out_evals[ns - 1] < evals:
        out_evals[ns] = evals
        out_fit[ns] = fit
        out_ones[ns] = ones
        out_level[ns] = lvl
        ns += 1
    return ns, terminated, evals, events, sum_s10, sum_s01, sum_s10sq


@njit(cache=True, nogil=True)
def _kernel_mu(
    n, budget, seed, sample_every,
    mu, use_crossover,
    mut_kind, mut_c, alias_j, alias_q, alias_off, pois_c,
    fit_kind, weights,
    big_l, thr, bsize, a_masks, b_masks, b_indptr, b_data,
    out_evals, out_fit, out_ones, out_level,
):
    np.random.seed(seed)
    nbytes = (n + 7) // 8
    pop = np.empty((mu, n), np.uint8)
    xp = np.zeros((mu, nbytes), np.uint8)
    z = np.zeros((mu, big_l + 1), np.int64)
    lvl = np.zeros(mu, np.int64)
    ones = np.zeros(mu, np.int64)
    ones_a = np.zeros(mu, np.int64)
    fit = np.zeros(mu, np.int64)
    ztmp = np.zeros(big_l + 1, np.int64)
    zstamp = np.full(big_l + 1, -1, np.int64)
    gen_id = 0

    events = np.int64(0)
    sum_s10 = np.int64(0)
    sum_s01 = np.int64(0)
    sum_s10sq = np.int64(0)

    evals = 0
    ns = 0
    next_at = sample_every
    terminated = 0
    opt_member = -1
    for m in range(mu):
        o = 0
        for i in range(n):
            b = 1 if np.random.random() < 0.5 else 0
            pop[m, i] = b
            if b:
                o += 1
                xp[m, i >> 3] |= np.uint8(1 << (7 - (i & 7)))
        ones[m] = o
        if fit_kind == FIT_HT:
            fit[m], lvl[m], ones_a[m] = _full_ht_state(
                xp[m], z[m], a_masks, b_masks, big_l, thr, bsize, n, o)
        elif fit_kind == FIT_LINEAR:
            acc = 0
            for i in range(n):
                if pop[m, i]:
                    acc += weights[i]
            fit[m] = acc
        else:
            fit[m] = o
        evals += 1
        if o == n and opt_member < 0:
            opt_member = m
            break

    # best member for the initial sample
    bi = 0
    for m in range(mu):
        if fit[m] > fit[bi]:
            bi = m
    if opt_member >= 0:
        bi = opt_member
        terminated = 1
    out_evals[ns] = evals
    out_fit[ns] = fit[bi]
    out_ones[ns] = ones[bi]
    out_level[ns] = lvl[bi]
    ns += 1
    while next_at <= evals:
        next_at += sample_every
    if terminated == 1:
        return ns, terminated, evals, events, sum_s10, sum_s01, sum_s10sq

    perm = np.arange(n, dtype=np.int64)
    swaps = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    cbits = np.empty(n, np.uint8)
    cxp = np.zeros(nbytes, np.uint8)
    cz = np.zeros(big_l + 1, np.int64)

    while evals + 1 <= budget:
        crossover = use_crossover == 1 and np.random.random() < 0.5
        if crossover:
            p1 = np.random.randint(0, mu)
            p2 = np.random.randint(0, mu)
            o = 0
            for t in range(nbytes):
                cxp[t] = 0
            for i in range(n):
                b = pop[p1, i] if np.random.random() < 0.5 else pop[p2, i]
                cbits[i] = b
                if b:
                    o += 1
                    cxp[i >> 3] |= np.uint8(1 << (7 - (i & 7)))
            c_ones = o
            if fit_kind == FIT_HT:
                c_fit, c_lvl, c_onesa = _full_ht_state(
                    cxp, cz, a_masks, b_masks, big_l, thr, bsize, n, o)
            elif fit_kind == FIT_LINEAR:
                acc = 0
                for i in range(n):
                    if cbits[i]:
                        acc += weights[i]
                c_fit = acc
                c_lvl = 0
                c_onesa = 0
            else:
                c_fit = o
                c_lvl = 0
                c_onesa = 0
            par = -1
            s = 0
        else:
            par = np.random.randint(0, mu)
            s = _draw_s(mut_kind, n, mut_c, alias_j, alias_q, alias_off, pois_c)
            _draw_positions(n, s, perm, swaps, pos)
            if fit_kind == FIT_HT:
                gen_id += 1
                c_fit, c_lvl, c_ones, c_onesa = _ht_eval(
                    pos, s, pop[par], xp[par], z[par], ztmp, zstamp, gen_id,
                    lvl[par], ones[par], ones_a[par], a_masks, b_indptr,
                    b_data, big_l, thr, n)
            else:
                c_fit, c_ones = _plain_eval(pos, s, pop[par], weights, fit_kind,
                                            fit[par], ones[par])
                c_lvl = 0
                c_onesa = 0
            s01 = 0
            for k in range(s):
                if pop[par, pos[k]] == 0:
                    s01 += 1
            if s01 > 0:
                s10 = s - s01
                events += 1
                sum_s10 += s10
                sum_s01 += s01
                sum_s10sq += s10 * s10
        evals += 1
        hit_opt = c_ones == n

        # selection: drop one uniformly random argmin among mu + 1 candidates
        worst = c_fit
        for m in range(mu):
            if fit[m] < worst:
                worst = fit[m]
        count = 1 if c_fit == worst else 0
        for m in range(mu):
            if fit[m] == worst:
                count += 1
        r = np.random.randint(0, count)
        victim = -1  # -1 means the child is dropped
        if c_fit == worst and r == count - 1:
            victim = -1
            keep_child = False
        else:
            idx = -1
            for m in range(mu):
                if fit[m] == worst:
                    idx += 1
                    if idx == r:
                        victim = m
                        break
            keep_child = True
        if hit_opt:
            keep_child = True
            if victim < 0:
                victim = 0  # any slot; run terminates immediately
        if keep_child:
            if crossover:
                for i in range(n):
                    pop[victim, i] = cbits[i]
                for t in range(nbytes):
                    xp[victim, t] = cxp[t]
                if fit_kind == FIT_HT:
                    for i in range(big_l + 1):
                        z[victim, i] = cz[i]
            else:
                if victim != par:
                    for i in range(n):
                        pop[victim, i] = pop[par, i]
                    for t in range(nbytes):
                        xp[victim, t] = xp[par, t]
                    if fit_kind == FIT_HT:
                        for i in range(big_l + 1):
                            z[victim, i] = z[par, i]
                _commit_flips(pos, s, pop[victim], xp[victim], z[victim],
                              b_indptr, b_data, fit_kind == FIT_HT)
            fit[victim] = c_fit
            lvl[victim] = c_lvl
            ones[victim] = c_ones
            ones_a[victim] = c_onesa
        if hit_opt:
            terminated = 1
            out_evals[ns] = evals
            out_fit[ns] = c_fit
            out_ones[ns] = c_ones
            out_level[ns] = c_lvl
            ns += 1
            return ns, terminated, evals, events, sum_s10, sum_s01, sum_s10sq
        if evals >= next_at:
            bi = 0
            for m in range(mu):
                if fit[m] > fit[bi]:
                    bi = m
            if out_evals[ns - 1] < evals:
                out_evals[ns] = evals
                out_fit[ns] = fit[bi]
                out_ones[ns] = ones[bi]
                out_level[ns] = lvl[bi]
                ns += 1
            while next_at <= evals:
                next_at += sample_every

    bi = 0
    for m in range(mu):
        if fit[m] > fit[bi]:
            bi = m
    if out_evals[ns - 1] < evals:
        out_evals[ns] = evals
        out_fit[ns] = fit[bi]
        out_ones[ns] = ones[bi]
        out_level[ns] = lvl[bi]
        ns += 1
    return ns, terminated, evals, events, sum_s10, sum_s01, sum_s10sq


# -- driver -------------------------------------------------------------------

_EMPTY_U8 = np.zeros((1, 1), dtype=np.uint8)
_EMPTY_I64 = np.zeros(1, dtype=np.int64)


def _mutation_params(spec, n):
    from .flipdist import BinomialFlips, PoissonFlips, PointMass, TableFlips, ZipfFlips

    if spec.variant == "rls":
        return MUT_ONE, 1.0, _EMPTY_I64, np.ones(1), 0, 1.0
    if spec.dist is None:
        return MUT_STD, float(spec.c), _EMPTY_I64, np.ones(1), 0, 1.0
    d = spec.dist
    if isinstance(d, PoissonFlips):
        return MUT_POISSON, 1.0, _EMPTY_I64, np.ones(1), 0, float(d.c)
    if isinstance(d, BinomialFlips):
        if d.n != n:
            raise ValueError("binomial flip distribution must match the problem dimension")
        return MUT_STD, float(d.c), _EMPTY_I64, np.ones(1), 0, 1.0
    if isinstance(d, PointMass):
        return MUT_ALIAS, 1.0, np.zeros(1, np.int64), np.ones(1), int(d.k), 1.0
    if isinstance(d, ZipfFlips):
        j, q = d._alias
        return MUT_ALIAS, 1.0, j.astype(np.int64), q.astype(np.float64), 1, 1.0
    if isinstance(d, TableFlips):
        j, q = d._alias
        return MUT_ALIAS, 1.0, j.astype(np.int64), q.astype(np.float64), 0, 1.0
    raise ValueError(f"unsupported flip distribution {type(d).__name__}")


def _function_params(f):
    kind = getattr(f, "kind", None)
    if kind == "onemax":
        return (FIT_ONEMAX, _EMPTY_I64, 0, np.int64(0), 0, _EMPTY_U8, _EMPTY_U8,
                np.zeros(f.n + 1, np.int64), _EMPTY_I64)
    if kind == "linear":
        return (FIT_LINEAR, np.asarray(f.weights, np.int64), 0, np.int64(0), 0,
                _EMPTY_U8, _EMPTY_U8, np.zeros(f.n + 1, np.int64), _EMPTY_I64)
    if kind == "hottopic":
        inst = f.instance
        inst.materialize_all()
        indptr32, data32 = inst.b_reverse_csr()
        return (
            FIT_HT,
            _EMPTY_I64,
            inst.params.num_levels,
            np.int64(inst.params.zero_threshold),
            inst.params.set_size_b,
            inst._a_masks,
            inst._b_masks,
            indptr32.astype(np.int64),
            data32.astype(np.int64),
        )
    raise ValueError(f"compiled engine does not support function kind {kind!r}")


def run_fast(spec, f, budget, seed, sample_every):
    from .algorithms import Trajectory, TrajectorySample, _MU_VARIANTS

    n = f.n
    mut_kind, mut_c, alias_j, alias_q, alias_off, pois_c = _mutation_params(spec, n)
    (fit_kind, weights, big_l, thr, bsize, a_masks, b_masks, b_indptr, b_data) = _function_params(f)

    maxs = budget // sample_every + 4
    out_evals = np.zeros(maxs, np.int64)
    out_fit = np.zeros(maxs, np.int64)
    out_ones = np.zeros(maxs, np.int64)
    out_level = np.zeros(maxs, np.int64)
    kseed = substream_u32(seed)

    if spec.variant in _MU_VARIANTS:
        use_crossover = 1 if spec.variant.endswith("ga") else 0
        ns, term, evals, ev, s10, s01, s10sq = _kernel_mu(
            n, budget, kseed, sample_every,
            spec.mu, use_crossover,
            mut_kind, mut_c, alias_j, alias_q, alias_off, pois_c,
            fit_kind, weights,
            big_l, thr, bsize, a_masks, b_masks, b_indptr, b_data,
            out_evals, out_fit, out_ones, out_level,
        )
    else:
        algo = ALGO_TWO_PHASE if spec.variant == "one_lambda_lambda_ga" else ALGO_PLUS
        adaptive = 1 if spec.adaptive is not None else 0
        adapt_f = spec.adaptive.factor if spec.adaptive else 1.5
        lam_max = float(n)
        if spec.adaptive is not None and spec.adaptive.lambda_max is not None:
            lam_max = float(spec.adaptive.lambda_max)
        gamma = spec.gamma if spec.gamma is not None else 1.0
        ns, term, evals, ev, s10, s01, s10sq = _kernel_single(
            n, budget, kseed, sample_every,
            algo, spec.lam, float(spec.c), float(gamma), adaptive, adapt_f, lam_max,
            mut_kind, mut_c, alias_j, alias_q, alias_off, pois_c,
            fit_kind, weights,
            big_l, thr, bsize, a_masks, b_masks, b_indptr, b_data,
            out_evals, out_fit, out_ones, out_level,
        )

    samples = [
        TrajectorySample(int(out_evals[i]), int(out_fit[i]), out_ones[i] / n, int(out_level[i]))
        for i in range(ns)
    ]
    return Trajectory(
        samples=samples,
        terminated="optimum" if term == 1 else "budget",
        total_evaluations=int(evals),
        instr_events=int(ev),
        instr_sum_s10=int(s10),
        instr_sum_s01=int(s01),
        instr_sum_s10_sq=int(s10sq),
    )
