"""DOT diagram of how the catalogue results depend on the three axioms.

The edge list is data: each edge records which earlier result a proof
invokes. Edges marked ``inferred`` come from an alternate proof or from a
reference that had to be read charitably.
"""

from __future__ import annotations

from dataclasses import dataclass

from .suite import CATALOGUE, TheoremId

AXIOMS = {
    "A1": ("non-negativity", "P(A) ≥ 0"),
    "A2": ("normalization", "P(Ω) = 1"),
    "A3": ("additivity", "P(⋃Aᵢ) = Σ P(Aᵢ), Aᵢ disjoint"),
}

# Results about combinations of events sit below the dividing line,
# results about dependent events above it.
COMBINATIONS = ("T1", "T2", "T3", "L1", "L2", "T4", "L3", "L4", "L5", "L6", "L7")
DEPENDENT = ("L8", "P1", "P2", "P3", "T5", "L9", "L10", "L11", "L12", "T6")


@dataclass(frozen=True)
class ProofEdge:
    source: str
    target: str
    cite: str
    inferred: bool = False


EDGES: tuple[ProofEdge, ...] = (
    ProofEdge("A3", "T1", "empty sets appended to a disjoint sequence"),
    ProofEdge("A3", "T2", "pad a finite family with empty sets"),
    ProofEdge("T1", "T2", "the padding terms vanish"),
    ProofEdge("T2", "T3", "blocks of a partition are disjoint"),
    ProofEdge("A2", "T3", "their union is the whole space"),
    ProofEdge("T2", "L2", "two disjoint decompositions, n = 2"),
    ProofEdge("L2", "T4", "base case and induction step"),
    ProofEdge("T1", "L3", "P(A∩B) = P(∅) = 0"),
    ProofEdge("L2", "L3", "drop the intersection term"),
    ProofEdge("T2", "L3", "second proof, n = 2", inferred=True),
    ProofEdge("L1", "L4", "proof cites itself; read as the disjoint-family lemma", inferred=True),
    ProofEdge("T2", "L4", "finite additivity"),
    ProofEdge("L3", "L5", "A and its complement are disjoint"),
    ProofEdge("A2", "L5", "A ∪ Ā is the whole space"),
    ProofEdge("A3", "L5", "first proof invokes additivity directly"),
    ProofEdge("L2", "L5", "second proof", inferred=True),
    ProofEdge("L3", "L6", "B = A ∪ (Ā∩B)"),
    ProofEdge("A1", "L6", "P(Ā∩B) ≥ 0"),
    ProofEdge("L6", "L7", "A ⊆ Ω"),
    ProofEdge("A2", "L7", "P(Ω) = 1"),
    ProofEdge("A1", "L8", "numerator is nonnegative"),
    ProofEdge("L7", "L8", "numerator at most the denominator"),
    ProofEdge("T1", "P1", "P(∅) = 0 in the numerator"),
    ProofEdge("L8", "P1", "definition of P(A|B)"),
    ProofEdge("L8", "P2", "P(A∩B) = P(B)"),
    ProofEdge("L8", "P3", "definition of P(A|B)"),
    ProofEdge("L4", "P3", "the sets Aᵢ∩B are disjoint"),
    ProofEdge("L8", "T5", "telescoping ratios"),
    ProofEdge("L8", "L9", "conditional form in both directions"),
    ProofEdge("L9", "L10", "pairs are sub-collections", inferred=True),
    ProofEdge("L9", "L11", "product form"),
    ProofEdge("T1", "L11", "disjoint means P(A∩B) = 0"),
    ProofEdge("L8", "L12", "P(A|Cᵢ)P(Cᵢ) = P(A∩Cᵢ)"),
    ProofEdge("T2", "L12", "the sets A∩Cᵢ are disjoint"),
    ProofEdge("A2", "L12", "the blocks cover the whole space"),
    ProofEdge("L8", "T6", "both conditionals share P(A∩Cᵢ)"),
    ProofEdge("L12", "T6", "evidence as a total probability"),
)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dependency_graph() -> str:
    """Return the diagram as DOT text."""
    out = [
        "digraph results {",
        "  rankdir=BT;",
        '  node [fontname="Helvetica"];',
        "",
    ]
    for aid, (title, stmt) in AXIOMS.items():
        label = _quote(f"{aid}: {title}")[:-1] + "\\n" + _quote(stmt)[1:]
        out.append(
            f"  {aid} [label={label}, kind=axiom, "
            "shape=ellipse, peripheries=2, style=filled, fillcolor=white];"
        )
    clusters = (
        ("cluster_combinations", "combinations of events", COMBINATIONS, "solid"),
        ("cluster_dependent", "dependent events", DEPENDENT, "dashed"),
    )
    for name, caption, members, style in clusters:
        out.append("")
        out.append(f"  subgraph {name} {{")
        out.append(f"    label={_quote(caption)};")
        out.append(f"    style={style};")
        for tid in members:
            entry = CATALOGUE[TheoremId(tid)]
            label = _quote(f"{tid}: {entry.title}")[:-1] + "\\n" + _quote(entry.statement)[1:]
            out.append(
                f"    {tid} [label={label}, "
                "kind=result, shape=box, style=filled, fillcolor=gray85];"
            )
        out.append("  }")
    out.append("")
    for e in EDGES:
        attrs = [f"cite={_quote(e.cite)}"]
        if e.inferred:
            attrs += ["inferred=true", "style=dashed"]
        out.append(f"  {e.source} -> {e.target} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
