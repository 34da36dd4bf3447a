from cache import report_storage
from cache.models import GroupScope, Verdict
from services import Construction, ensure_cache_consistent, format_report, run_verification


def claim_filter(raw: str) -> list:
    return [p.strip() for p in raw.split(",") if p.strip()]


def add_parser(subparsers, common) -> None:
    parser = subparsers.add_parser("verify", parents=[common],
                                   help="run the claim manifest and write the report")
    parser.add_argument("--group", type=GroupScope, choices=list(GroupScope), default=GroupScope.BOTH,
                        help="restrict group-specific claims to H or K")
    parser.add_argument("--claims", type=claim_filter, default=[],
                        help="comma separated claim id or label prefixes, e.g. L3.1,T1.2 or relations")
    parser.add_argument("--report-name", default="report", help="file stem of the saved report")
    parser.set_defaults(handler=run)


def run(toolkit, args) -> int:
    construction: Construction = toolkit.construction()
    ensure_cache_consistent(construction)
    report = run_verification(construction, args.claims, args.group)
    path = report_storage.save_report(report, args.report_name)
    report.notes.append(f"report: {path}")
    toolkit.emit(format_report(report), report.model_dump(mode="json"))
    return 0 if report.overall is Verdict.PASS else 1
