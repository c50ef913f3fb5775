"""Shared generators for the suite.

Two flavours of randomness: hypothesis strategies for shrinkable property
tests, and a plain seeded generator for the bulk gates where reproducible
corpora matter more than shrinking.
"""

from hypothesis import strategies as st

from interpol.syntax import And, Atom, Bot, Box, Implies, Or, Top, neg

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def formula_strategy(atoms=("p", "q", "r"), modal=True, max_leaves=8):
    base = st.sampled_from([Atom(a) for a in atoms] + [Top(), Bot()])

    def grow(children):
        pairs = st.tuples(children, children)
        branches = [
            pairs.map(lambda t: And(*t)),
            pairs.map(lambda t: Or(*t)),
            pairs.map(lambda t: Implies(*t)),
            children.map(neg),
        ]
        if modal:
            branches.append(children.map(Box))
        return st.one_of(branches)

    return st.recursive(base, grow, max_leaves=max_leaves)


def rand_formula(rng, atoms, depth, modal_depth=0):
    """Seeded formula generator.  Binary connectives are favoured so the two
    halves of a random pair share vocabulary often enough to be provable."""
    kinds = ["atom", "and", "and", "or", "or", "imp", "neg"]
    if modal_depth > 0:
        kinds += ["box", "box"]
    kind = rng.choice(kinds) if depth > 0 else "atom"
    if kind == "atom":
        name = rng.choice(list(atoms) + ["top", "bot"])
        if name == "top":
            return Top()
        if name == "bot":
            return Bot()
        return Atom(name)
    if kind == "box":
        return Box(rand_formula(rng, atoms, depth - 1, modal_depth - 1))
    if kind == "neg":
        return neg(rand_formula(rng, atoms, depth - 1, modal_depth))
    ctor = {"and": And, "or": Or, "imp": Implies}[kind]
    return ctor(rand_formula(rng, atoms, depth - 1, modal_depth),
                rand_formula(rng, atoms, depth - 1, modal_depth))
