import random

from swissgambit.rng import derive_seed, stream


def test_derive_seed_is_stable():
    # frozen: changing the hash or the key layout would silently re-run
    # every experiment with different numbers
    assert derive_seed(0, "tournament", 0) == 13304919574166677680
    assert derive_seed(7, "game", 3) == 14115101460532283006


def test_same_key_same_stream():
    a = stream(42, "game", 3)
    b = stream(42, "game", 3)
    assert [a.random() for _ in range(20)] == [b.random() for _ in range(20)]


def test_distinct_keys_distinct_streams():
    seen = set()
    for master in range(3):
        for label in ("tournament", "game", "cmpl"):
            for k in range(50):
                seen.add(derive_seed(master, label, k))
    assert len(seen) == 3 * 3 * 50


def test_key_parts_do_not_collide_when_joined():
    # "a",1 and "a1" must hash differently even though naive concatenation
    # would merge them
    assert derive_seed(0, "a", 1) != derive_seed(0, "a1")
    assert derive_seed(0, 12, 3) != derive_seed(0, 1, 23)


def test_streams_are_private():
    # drawing from one stream must not shift another stream with a
    # different key, regardless of interleaving
    a = stream(0, "x")
    a.random()
    b = stream(0, "y")
    first = b.random()
    assert first == stream(0, "y").random()


def test_stream_returns_plain_random_instance():
    assert isinstance(stream(0, "x"), random.Random)
