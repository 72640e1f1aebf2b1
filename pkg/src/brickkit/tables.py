"""Fixed-column text tables for catalogs and transfer plans.

Output is deterministic for identical inputs; the table command's output is
golden-file tested, so format changes here are contract changes.
"""

from __future__ import annotations

from .catalog import GBPS_QUICK_REFERENCE, PUBLISHED_MEDIA_FIGURES
from .cost_model import (
    LinkSpec,
    MediaSpec,
    PlanOption,
    link_cost_per_tb,
    link_transfer_time,
    link_unit_cost,
    media_campaign_cost,
    media_transfer_time,
)
from .errors import ConfigError
from .units import TB, DataSize, format_dollars, format_number, humanize_duration, round_half_up

# A computed campaign cost within this fraction of the published figure is
# treated as agreeing with it; anything further apart earns an ANOMALY line.
PUBLISHED_COST_TOLERANCE = 0.10


def render_grid(headers: list[str], rows: list[list[str]], align: str | None = None) -> str:
    """Render rows under headers with two-space gutters.

    ``align`` holds one character per column, "l" or "r"; default is all
    left. Raises on an empty row set: an empty table hides mistakes.
    """
    if not rows:
        raise ConfigError("refusing to render an empty table")
    for row in rows:
        if len(row) != len(headers):
            raise ConfigError(f"row has {len(row)} cells, expected {len(headers)}")
    align = align or "l" * len(headers)
    widths = [
        max(len(headers[i]), max(len(row[i]) for row in rows))
        for i in range(len(headers))
    ]
    lines = []
    for cells in [headers, *rows]:
        padded = [
            cells[i].rjust(widths[i]) if align[i] == "r" else cells[i].ljust(widths[i])
            for i in range(len(headers))
        ]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines)


def link_table(links: list[LinkSpec]) -> str:
    """One row per link: unit price, dollars per terabyte, time per terabyte."""
    one_tb = DataSize(TB)
    rows = []
    for link in links:
        if link.rent_per_month is None:
            rent = unit = per_tb = "-"
        else:
            rent = format_dollars(link.rent_per_month)
            unit = format_dollars(link_unit_cost(link))
            per_tb = f"{link_cost_per_tb(link):,}"
        rows.append([
            link.name,
            format_number(link.speed_mbps),
            rent,
            unit,
            per_tb,
            humanize_duration(link_transfer_time(one_tb, link)),
        ])
    headers = ["Link", "Mbps", "Rent $/mo", "$/Mbps/mo", "$/TB sent", "Time/TB"]
    return render_grid(headers, rows, align="lrrrrl")


def media_table(media: list[MediaSpec], campaign: DataSize) -> str:
    """One row per medium: per-TB pipeline timing plus campaign economics."""
    one_tb = DataSize(TB)
    campaign_tb = format_number(campaign.tb)
    rows = []
    for spec in media:
        timing = media_transfer_time(one_tb, spec)
        cost, per_tb = media_campaign_cost(campaign, spec)
        read_write_hours = (timing.write_seconds + timing.read_seconds) / 3600.0
        rows.append([
            spec.name,
            f"{spec.robot_sites} x {format_dollars(spec.robot_cost_per_site)}",
            format_dollars(spec.media_cost_per_tb),
            f"{int(round_half_up(read_write_hours))} h",
            f"{int(round_half_up(spec.ship_hours))} h",
            humanize_duration(timing.total_seconds),
            f"{int(round_half_up(timing.effective_mbps))}",
            format_dollars(cost),
            format_dollars(per_tb),
        ])
    headers = [
        "Media", "Robots", "Media $/TB", "Write+read/TB", "Ship",
        "Total/TB", "Eff Mbps", f"Cost ({campaign_tb} TB)", "$/TB shipped",
    ]
    return render_grid(headers, rows, align="llrrrlrrr")


def media_anomaly_lines(media: list[MediaSpec], campaign: DataSize) -> list[str]:
    """ANOMALY markers for rows whose computed cost contradicts the published one.

    Only media with published reference figures (the built-in catalog) can
    produce markers; agreement within the tolerance stays silent.
    """
    lines = []
    for spec in media:
        published = PUBLISHED_MEDIA_FIGURES.get(spec.name)
        if published is None or campaign.tb != 10:
            continue
        cost, _ = media_campaign_cost(campaign, spec)
        reference = float(published["cost_10tb"])  # type: ignore[arg-type]
        if abs(cost - reference) / reference > PUBLISHED_COST_TOLERANCE:
            timing = media_transfer_time(DataSize(TB), spec)
            lines.append(
                f"ANOMALY {spec.name}: computed {format_dollars(cost)} dollars and"
                f" {humanize_duration(timing.total_seconds)}/TB; the published row says"
                f" {format_dollars(reference)} and {published['total']}, which the"
                " cataloged rates and reuse policy cannot reproduce."
            )
    return lines


def notes_lines() -> list[str]:
    """Documented divergences between computed figures and published ones."""
    return [
        "note: computed with decimal units (1 TB = 10^12 bytes) and a 30-day month;"
        " dollar cells round to the nearest whole dollar.",
        "note: Gbps link: the published quick reference lists"
        f" {GBPS_QUICK_REFERENCE}/TB, but the published detail table and the rate"
        " arithmetic both give 2.2 hours/TB; the computed figure is printed.",
        "note: DiskBrick: the published 10 TB campaign cost of"
        f" {format_dollars(float(PUBLISHED_MEDIA_FIGURES['DiskBrick']['cost_10tb']))}"  # type: ignore[arg-type]
        " carries 200 dollars not explained by robots plus media; the computed"
        " 2,400 sits within 10% of it.",
    ]


def plan_table(options: list[PlanOption], size: DataSize, objective: str) -> str:
    """Ranked strategies for one transfer, best first."""
    rows = []
    for rank, option in enumerate(options, start=1):
        estimate = option.estimate
        cost = "-" if estimate.cost_dollars is None else format_dollars(estimate.cost_dollars)
        per_tb = "-" if estimate.dollars_per_tb is None else format_dollars(estimate.dollars_per_tb)
        rows.append([
            str(rank),
            option.name,
            option.kind,
            humanize_duration(estimate.total_seconds),
            format_number(round_half_up(estimate.effective_mbps, 1)),
            cost,
            per_tb,
        ])
    headers = ["Rank", "Strategy", "Kind", "Total time", "Eff Mbps", "Cost $", "$/TB"]
    table = render_grid(headers, rows, align="rlllrrr")
    title = f"Transfer plan for {format_number(size.tb)} TB, ranked by {objective}"
    return f"{title}\n{table}"
