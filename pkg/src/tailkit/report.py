"""CSV report rows for the experiment harness.

The column set is fixed; reports open with commented context lines (the
canonical config among them) so every row can be recomputed from the file
alone.  Formatting uses shortest-round-trip floats, which makes outputs
byte-deterministic for a fixed (config, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

CSV_HEADER = "u,log_u,formula,asym_value,method,estimate,std_error,ratio,n_samples,seed,error"


@dataclass
class ReportRow:
    u: float
    log_u: float
    formula: str = ""
    asym_value: float | None = None
    method: str = ""
    estimate: float | None = None
    std_error: float | None = None
    n_samples: int | None = None
    seed: int | None = None
    error: str = ""

    @property
    def ratio(self) -> float | None:
        """estimate / asym_value, present only when both sides are."""
        if self.asym_value is None or self.estimate is None or self.asym_value <= 0.0:
            return None
        return self.estimate / self.asym_value


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render_report(rows, head_comments=(), tail_comments=()) -> str:
    """Render the full CSV text: leading comments, header, rows, trailing
    summary comments.  Lines end with newline characters only."""
    lines = [f"# {c}" for c in head_comments]
    lines.append(CSV_HEADER)
    for r in rows:
        lines.append(
            ",".join(
                (
                    _fmt(r.u),
                    _fmt(r.log_u),
                    r.formula,
                    _fmt(r.asym_value),
                    r.method,
                    _fmt(r.estimate),
                    _fmt(r.std_error),
                    _fmt(r.ratio),
                    _fmt(r.n_samples),
                    _fmt(r.seed),
                    r.error.replace(",", ";").replace("\n", " "),
                )
            )
        )
    lines.extend(f"# {c}" for c in tail_comments)
    return "\n".join(lines) + "\n"
