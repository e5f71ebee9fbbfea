import pytest

from mtcf.system.pipeline import Pipeline, StageError


def diamond():
    #     total
    #    /     \
    #  left   right
    #    \     /
    #     base
    p = Pipeline("diamond")
    calls = []

    @p.stage()
    def base():
        calls.append("base")
        return 2

    @p.stage(depends=["base"])
    def left(base):
        calls.append("left")
        return base + 1

    @p.stage(depends=["base"])
    def right(base):
        calls.append("right")
        return base * 10

    @p.stage(depends=["left", "right"])
    def total(left, right):
        calls.append("total")
        return left + right

    return p, calls


def test_diamond_runs_each_stage_once():
    """Shared dependencies run once, before everything that needs them."""
    p, calls = diamond()
    results = p.run("total")
    assert results == {"base": 2, "left": 3, "right": 20, "total": 23}
    assert calls == ["base", "left", "right", "total"]


def test_partial_target():
    """Only the stages below the target run."""
    p, calls = diamond()
    assert p.run("left") == {"base": 2, "left": 3}
    assert calls == ["base", "left"]
    assert p.list_stages() == ["base", "left", "right", "total"]


def test_depth_map():
    """The shared base sits below both branches."""
    p, _ = diamond()
    tree = p.generate_dependency_tree("total")
    assert tree.max_depth == 2
    assert [r.name for r in tree.generate_order()] == ["base", "left", "right", "total"]
    assert "Depth 1" in repr(tree)


def test_missing_stage():
    p = Pipeline("broken")

    @p.stage(depends=["ghost"])
    def consumer(ghost):
        return ghost

    with pytest.raises(ValueError, match="Stage 'ghost' not found"):
        p.run("consumer")
    with pytest.raises(ValueError, match="Stage 'nothing' not found"):
        p.run("nothing")


def test_parameters_must_match_dependencies():
    p = Pipeline("mismatch")
    with pytest.raises(ValueError, match="must match its dependencies"):
        @p.stage(depends=["a"])
        def stage(b):
            return b


def test_failing_stage_is_wrapped():
    """Exceptions inside a stage come out as StageError naming the stage."""
    p = Pipeline("failing")

    @p.stage()
    def source():
        return 0

    @p.stage(depends=["source"])
    def divide(source):
        return 1 / source

    with pytest.raises(StageError, match="Stage 'divide' failed") as err:
        p.run("divide")
    assert err.value.stage == "divide"
    assert "ZeroDivisionError" in str(err.value.witness)
    assert isinstance(err.value.__cause__, ZeroDivisionError)


def test_circular_dependency_is_dropped():
    """The back edge of a cycle is ignored; the stage that needed it then fails."""
    p = Pipeline("cycle")

    @p.stage(depends=["second"])
    def first(second):
        return second

    @p.stage(depends=["first"])
    def second(first):
        return first

    order = [r.name for r in p.generate_dependency_tree("first").generate_order()]
    assert order == ["second", "first"]
    with pytest.raises(StageError) as err:
        p.run("first")
    assert err.value.stage == "second"
