import pytest
from hypothesis import given
from hypothesis import strategies as st

from ksort.arena import (BEST, RANK, TIE, ArenaConfig, ArenaState, Battle, Vote, add_model,
                         apply_vote, leaderboard, propose_battle, vote_to_relations)
from ksort.errors import KSortError, MatchmakingError, StaleBattleError, VoteError
from ksort.rating import Rating, conservative_score


def arena(n=50, **cfg):
    return ArenaState.with_models([f"m{i}" for i in range(n)], ArenaConfig(**cfg))


def test_fresh_proposal():
    state = arena()
    b = propose_battle(state)
    assert len(b.participants) == 4 and len(set(b.participants)) == 4
    assert b.pivot == b.participants[0]
    assert propose_battle(state) == b
    pivots = {propose_battle(arena(tiebreak_seed=s)).pivot for s in range(30)}
    assert len(pivots) > 10


def test_pivot_is_least_compared():
    state = arena(10)
    for i in range(10):
        if i != 7:
            state.ledger.record([i, (i + 1) % 10 if (i + 1) % 10 != 7 else (i + 2) % 10])
    assert propose_battle(state).pivot == 7


def test_new_model_becomes_pivot():
    state = arena(8)
    for t in range(30):
        b = propose_battle(state)
        state.apply(b, Vote(BEST, b.participants[t % 4]))
    state = add_model(state, "newcomer")
    assert propose_battle(state).pivot == state.id_of("newcomer")


def test_too_few_models():
    with pytest.raises(MatchmakingError):
        propose_battle(arena(3))


def test_best_vote_relations():
    b = Battle("x", (0, 1, 2, 3))
    rel = vote_to_relations(b, Vote(BEST, 0))
    assert set(rel.wins) == {(0, 1), (0, 2), (0, 3)} and not rel.ties
    tie = vote_to_relations(b, Vote(BEST, TIE))
    assert len(tie.ties) == 6 and not tie.wins


def test_rank_vote_relations():
    b = Battle("x", (0, 1, 2, 3))
    total = vote_to_relations(b, Vote(RANK, {0: 1, 1: 2, 2: 3, 3: 4}))
    assert set(total.wins) == {(a, c) for a in range(4) for c in range(a + 1, 4)}
    flat = vote_to_relations(b, Vote(RANK, dict.fromkeys(range(4), 1)))
    assert len(flat.ties) == 6 and not flat.wins
    mixed = vote_to_relations(b, Vote(RANK, {0: 2, 1: 1, 2: 2, 3: 3}))
    assert len(mixed) == 6 and mixed.ties == ((0, 2),)


@pytest.mark.parametrize("vote", [
    Vote(BEST, 9), Vote(RANK, {0: 1, 1: 2}), Vote(RANK, {0: 1, 1: 2, 9: 3}),
    Vote(RANK, {0: 1, 1: 0, 2: 3}), Vote(RANK, {0: 1, 1: True, 2: 3}), Vote("podium", 0),
])
def test_invalid_votes(vote):
    with pytest.raises(VoteError):
        vote_to_relations(Battle("x", (0, 1, 2)), vote)


def test_battle_validation():
    with pytest.raises(VoteError):
        Battle("x", (1, 1))
    with pytest.raises(VoteError):
        Battle("x", (1,))


def test_all_tie_vote_keeps_ratings_counts_ledger():
    state = arena(4)
    b = propose_battle(state)
    out = apply_vote(state, b, Vote(BEST, TIE))
    assert out.ratings == state.ratings
    assert out.ledger.n_total == 2
    assert all(out.ledger.row_sum(p) == 3 for p in b.participants)


def test_best_vote_moves_everyone():
    state = arena(4)
    b = propose_battle(state)
    w = b.participants[1]
    out = apply_vote(state, b, Vote(BEST, w))
    prior = state.cfg.prior()
    assert out.ratings[w].mu > prior.mu
    losers = [p for p in b.participants if p != w]
    for p in losers:
        assert out.ratings[p].mu < prior.mu
        assert out.ratings[w].sigma < out.ratings[p].sigma < prior.sigma


def test_stale_battle_rejected():
    state = arena(4)
    b = propose_battle(state)
    state.apply(b, Vote(BEST, b.pivot))
    with pytest.raises(StaleBattleError):
        state.apply(b, Vote(BEST, b.pivot))


def test_unknown_participant_rejected():
    with pytest.raises(KSortError):
        arena(4).apply(Battle("x", (0, 99)), Vote(BEST, 0))


def test_leaderboard_examples():
    state = arena(5, sigma_min=0.01)
    board = leaderboard(state)
    prior = state.cfg.prior()
    assert [e.id for e in board] == list(range(5))
    assert {e.score for e in board} == {conservative_score(prior, state.cfg.eta)}
    state.apply(Battle("b", (3, 1)), Vote(BEST, 1))
    board = leaderboard(state)
    assert board[0].id == 1 and board[-1].id == 3
    assert len(board) == 5


def test_add_model_examples():
    state = arena(50)
    grown = add_model(state, "new")
    assert len(grown.ratings) == 51 and len(state.ratings) == 50
    new = grown.id_of("new")
    assert grown.ledger.row_sum(new) == 0
    entry = next(e for e in leaderboard(grown) if e.id == new)
    assert entry.score == grown.cfg.mu0 - grown.cfg.eta * grown.cfg.sigma0
    with pytest.raises(KSortError):
        add_model(grown, "new")
    with pytest.raises(KSortError):
        add_model(grown, "")


def test_ids_not_reused():
    state = arena(3)
    state.register("x")
    assert state.next_id == 4
    assert set(state.models) == set(state.ratings) == set(state.ledger.ids)


votes = st.lists(st.integers(0, 3), min_size=4, max_size=4)


@pytest.mark.invariant
@given(st.integers(4, 12), st.lists(votes, min_size=1, max_size=12), st.integers(0, 2 ** 20))
def test_only_participants_change(n, vote_seq, seed):
    state = arena(n, tiebreak_seed=seed)
    for raw in vote_seq:
        b = propose_battle(state)
        if raw[0] == 0:
            vote = Vote(BEST, TIE)
        elif raw[0] == 1:
            vote = Vote(BEST, b.participants[raw[1]])
        else:
            vote = Vote(RANK, {p: raw[j] + 1 for j, p in enumerate(b.participants)})
        before = dict(state.ratings)
        state.apply(b, vote)
        for i in before:
            if i not in b.participants:
                assert state.ratings[i] is before[i]
        rel = vote_to_relations(b, vote)
        if vote.mode == BEST and vote.payload != TIE:
            assert len(rel.wins) == len(b.participants) - 1
        if vote.mode == RANK and len(set(vote.payload.values())) == len(b.participants):
            assert len(rel.wins) == 6


@pytest.mark.invariant
@given(st.lists(st.tuples(st.integers(-3, 3).map(float), st.sampled_from([1.0, 2.0, 3.0])),
                min_size=1, max_size=12))
def test_leaderboard_total_order(params):
    state = ArenaState()
    for j, (mu, sigma) in enumerate(params):
        state.register(f"m{j}", Rating(mu, sigma, 1.0))
    board = leaderboard(state)
    keys = [(-e.score, e.sigma, e.id) for e in board]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert leaderboard(state.copy()) == board
