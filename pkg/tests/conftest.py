"""Shared helpers for the test suite."""

from digitdist.shifts import ShiftSpec, is_transitive, sft_shortcut_presentation


def random_regular_sft(rng, max_tries=200):
    """Random k-regular irreducible 0/1 digit matrix as an sft1 shortcut."""
    for _ in range(max_tries):
        g = rng.randrange(3, 7)
        m = rng.randrange(3, min(g, 5) + 1)
        digits = sorted(rng.sample(range(g), m))
        k = rng.randrange(2, m)
        perms = []
        cells = set()
        ok = True
        for _ in range(k):
            for _ in range(50):
                perm = list(range(m))
                rng.shuffle(perm)
                new = {(i, perm[i]) for i in range(m)}
                if not (new & cells):
                    cells |= new
                    perms.append(perm)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        allowed = {(digits[i], digits[j]) for (i, j) in cells}
        spec = ShiftSpec.sft1(g, digits, allowed)
        fc = sft_shortcut_presentation(spec)
        if is_transitive(fc):
            return spec, fc
    raise AssertionError("could not sample a regular irreducible SFT")


def brute_cover_state_counts(fc, fam, ell, length):
    """Independent word-level oracle: nondeterministic path enumeration over
    the raw cover edges, prefix focus by hand, residues by evaluation."""
    from digitdist.words import Word

    out_map = {}
    for (u, d), v in fc.trans.items():
        out_map.setdefault(u, {})[d] = v
    counts = {}

    def walk(words_states, word):
        if len(word) == length:
            states = words_states
            if len(states) != 1:
                return
            node = next(iter(states))
            residue = fam.eval_word(Word(fc.base, tuple(word)))
            key = (residue, node)
            counts[key] = counts.get(key, 0) + 1
            return
        idx = len(word)
        for d in range(fc.base):
            nxt = {out_map[s][d] for s in words_states if d in out_map.get(s, {})}
            if not nxt:
                continue
            if idx + 1 == ell and len(nxt) != 1:
                continue  # prefix fails to focus
            word.append(d)
            walk(nxt, word)
            word.pop()

    walk(set(fc.nodes), [])
    return counts
