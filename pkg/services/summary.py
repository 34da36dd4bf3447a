from cache.models import Verdict, VerificationReport

from .construction import Construction

MARKS = {Verdict.PASS: "✅", Verdict.FAIL: "❌", Verdict.INFO: "ℹ️", Verdict.SKIPPED: "⏭️"}


def format_report(report: VerificationReport, *, show_skipped: bool = False) -> str:
    env = report.environment
    lines = [
        "📊 **Verification report**",
        "",
        f"• modulus: {env.modulus_bits} ({env.modulus:#x})",
        f"• commutator convention: {env.commutator_convention}",
        f"• composition: {env.composition}; conjugation: {env.conjugation}",
        "",
    ]
    for record in report.claims:
        if record.verdict is Verdict.SKIPPED and not show_skipped:
            continue
        line = f"{MARKS[record.verdict]} {record.claim_id} [{record.label}]: {record.statement}"
        if record.wall_time:
            line += f" ({record.wall_time:.2f}s)"
        lines.append(line)
        if record.error:
            lines.append(f"    error: {record.error}")
        elif record.verdict is Verdict.FAIL:
            failed = record.witness.get("failed_items") or [k for k, v in record.witness.items() if v is False]
            if failed:
                lines.append(f"    failed: {', '.join(str(x) for x in failed)}")
    counts = report.counts()
    lines += [
        "",
        f"passed {counts['pass']}, failed {counts['fail']}, info {counts['info']}, skipped {counts['skipped']}",
        f"{MARKS[report.overall]} overall: {report.overall.value} in {report.wall_time:.1f}s",
    ]
    reported = len(report.coverage) - len(report.coverage_gaps())
    lines.append(f"coverage: {reported}/{len(report.coverage)} claim ids reported")
    lines += [f"note: {note}" for note in report.notes]
    return "\n".join(lines)


def format_build(construction: Construction) -> str:
    graph = construction.graph
    counts = graph.side_counts
    return (
        "🧩 **Coset graph**\n\n"
        f"• vertices: {graph.num_vertices} ({counts[min(counts)]} + {counts[max(counts)]})\n"
        f"• edges: {graph.num_edges}\n"
        f"• source: {construction.graph_source}\n"
        f"• |K| = {construction.group_order('K')}, |H| = {construction.group_order('H')}"
    )
