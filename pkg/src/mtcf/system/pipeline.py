"""
Dependency-ordered computation stages.

A stage is a function registered with `Pipeline.stage(depends=[...])`; its
parameters must be named after the stages it depends on, and it receives
their results. `Pipeline.run(target)` resolves the dependency tree, runs the
stages deepest first and returns every result keyed by stage name.
"""

import time
import inspect
import traceback
from typing import Any, Callable, Dict, List, Optional

from ..system.logger import mlog


class StageError(RuntimeError):
    """A pipeline stage failed; `stage` names it and `witness` says why."""

    def __init__(self, stage: str, witness: Any):
        self.stage = stage
        self.witness = witness
        super().__init__(f"Stage '{stage}' failed: {witness}")


class StageRecipe:
    def __init__(self, func: Callable, name: str, depends: List[str], depth: int = -1):
        self.func = func
        self.name = name
        self.depends = depends

        # Dependency Graph
        self.depth = depth
        self.children: List['StageRecipe'] = []

    def run(self, results: Dict[str, Any]) -> Any:
        kwargs = {dep: results[dep] for dep in self.depends}
        return self.func(**kwargs)

    def add_child(self, child: 'StageRecipe') -> None:
        self.children.append(child)

    def __repr__(self) -> str:
        return f"StageRecipe(name={self.name}, depth={self.depth})"


class DependencyTree:
    def __init__(self, target: str, recipe_lut: Dict[str, StageRecipe]):
        self.max_depth = 0
        self.recipe_lut = recipe_lut
        self.depth_map: Dict[int, List[StageRecipe]] = {}

        for recipe in recipe_lut.values():
            recipe.depth = -1
            recipe.children = []

        if target not in recipe_lut:
            raise ValueError(f"Stage '{target}' not found")
        self.root = self._build_tree(target, [], 0)
        self._compute_depth_map(self.root, set())

    def _build_tree(self, name: str, history: List[str], depth: int) -> StageRecipe:
        mlog.debug(f"Building tree node for stage '{name}' at depth {depth}")
        if name not in self.recipe_lut:
            raise ValueError(f"Stage '{name}' not found")

        recipe = self.recipe_lut[name]
        if depth > self.max_depth:
            self.max_depth = depth

        if recipe.depth >= 0:
            if depth > recipe.depth:
                self._update_subtree_depth(recipe, depth)
            return recipe

        recipe.depth = depth
        for dep in recipe.depends:
            if dep in history or dep == name:
                mlog.info(f"Circular dependency {name} <- {dep} dropped.")
                continue
            recipe.add_child(self._build_tree(dep, history + [name], depth + 1))
        return recipe

    def _update_subtree_depth(self, node: StageRecipe, new_depth: int) -> None:
        if new_depth <= node.depth:
            return
        if new_depth > self.max_depth:
            self.max_depth = new_depth
        node.depth = new_depth
        for child in node.children:
            self._update_subtree_depth(child, new_depth + 1)

    def _compute_depth_map(self, node: StageRecipe, seen: set) -> None:
        if node.name in seen:
            return
        seen.add(node.name)
        self.depth_map.setdefault(node.depth, []).append(node)
        for child in node.children:
            self._compute_depth_map(child, seen)

    def generate_order(self) -> List[StageRecipe]:
        order: List[StageRecipe] = []
        for depth in sorted(self.depth_map.keys(), reverse=True):
            order.extend(sorted(self.depth_map[depth], key=lambda r: r.name))
        mlog.debug(f"Generated stage order: {[r.name for r in order]}")
        return order

    def __repr__(self) -> str:
        lines = [f"StageTree (max_depth={self.max_depth})"]
        for depth in sorted(self.depth_map.keys()):
            lines.append(f"  Depth {depth}: {[node.name for node in self.depth_map[depth]]}")
        return "\n".join(lines)


class Pipeline:
    """A named set of stages."""

    def __init__(self, name: str):
        self.name = name
        self.recipe_lut: Dict[str, StageRecipe] = {}

    def _register(self, func: Callable, depends: List[str]) -> Callable:
        params = list(inspect.signature(func).parameters)
        if sorted(params) != sorted(depends):
            raise ValueError(f"Stage '{func.__name__}' parameters {params} must match its dependencies {depends}")
        mlog.debug(f"Registering stage '{func.__name__}' with depends {depends}")
        self.recipe_lut[func.__name__] = StageRecipe(func, func.__name__, list(depends))
        return func

    def stage(self, depends: Optional[List[str]] = None):
        def decorator(func):
            return self._register(func, list(depends or []))
        return decorator

    def generate_dependency_tree(self, target: str) -> DependencyTree:
        return DependencyTree(target, self.recipe_lut)

    def run(self, target: str) -> Dict[str, Any]:
        order = self.generate_dependency_tree(target).generate_order()
        results: Dict[str, Any] = {}
        for recipe in order:
            mlog.info(f"[{self.name}] stage {recipe.name} ...")
            start = time.perf_counter()
            try:
                results[recipe.name] = recipe.run(results)
            except StageError:
                raise
            except Exception as e:
                mlog.debug(traceback.format_exc())
                raise StageError(recipe.name, f"{type(e).__name__}: {e}") from e
            mlog.info(f"[{self.name}] stage {recipe.name} done in {time.perf_counter() - start:.2f}s")
        return results

    def list_stages(self) -> List[str]:
        return sorted(self.recipe_lut)
