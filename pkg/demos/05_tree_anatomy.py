"""Peek inside the game tree as traversals accumulate.

The learner and adversary alternate moves (learner first).  A traversal
descends along best children where the tree is expanded, grows the frontier
by one node otherwise, and finishes with a rollout whose terminal realizes
an actual play.  Visit counts reveal where the search spends its effort.
"""

from clfgame import (
    BeliefState,
    ExpansionState,
    GameTreeNode,
    Mover,
    PlayStats,
    RandomSource,
    SearchContext,
    SelfPlayConfig,
    TypeDistribution,
    default_config,
    tree_traverse,
)

cfg = default_config()
run = SelfPlayConfig(h=6, true_p=TypeDistribution.concentrated(2, 4),
                     seed=11).resolved(cfg)
ctx = SearchContext(cfg=cfg, run=run,
                    belief=BeliefState.fresh(cfg.n_classifiers, cfg.n_types),
                    rng=RandomSource(run.seed), stats=PlayStats.fresh(cfg))
root = GameTreeNode(0, Mover.LEARNER)


def show(node, indent=0, max_depth=2):
    label = "root" if node.incoming_action is None else \
        (f"L{node.incoming_action}" if node.mover is Mover.ADVERSARY
         else f"T{node.incoming_action}")
    print("  " * indent
          + f"{label:5s} depth={node.depth} {node.mover.name.lower():9s} "
          + f"visits={node.visit_count:3d} "
          + f"mean_u={node.value_learner / max(node.visit_count, 1):.4f} "
          + f"[{node.expansion_state.value}]")
    if node.depth < max_depth:
        for action in sorted(node.children):
            show(node.children[action], indent + 1, max_depth)


for checkpoint in (1, 2, 10, 40):
    while root.visit_count < checkpoint:
        tree_traverse(root, ctx)
    print(f"\nAfter {checkpoint} traversal(s), {len(ctx.plays)} plays realized:")
    show(root)

counts = {state: 0 for state in ExpansionState}
stack = [root]
while stack:
    node = stack.pop()
    counts[node.expansion_state] += 1
    stack.extend(node.children.values())
print("\nNode states across the tree:",
      {state.value: n for state, n in counts.items()})
