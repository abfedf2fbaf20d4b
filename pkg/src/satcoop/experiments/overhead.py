import pandas as pd

from satcoop.config.scenario import Mode, ScenarioConfig
from satcoop.errors import DomainError
from satcoop.experiments.results import OverheadReport, RunResult


def overhead_report(L: int, mode: Mode) -> OverheadReport:
    """Scalars forwarded to the combining satellite.

    Full CSI forwards L samples per symbol plus L channel estimates per
    coherence interval; partial CSI forwards only the normalised samples, its
    long-term moments changing too slowly to count.
    """
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    mode = Mode(mode)
    if mode is Mode.FULL_CSI:
        per_symbol, per_interval = L, L
    elif mode is Mode.PARTIAL_CSI:
        per_symbol, per_interval = L, 0
    else:
        per_symbol, per_interval = 0, 0
    return OverheadReport(mode.value, L, per_symbol, per_interval)


def overhead_table(config: ScenarioConfig) -> RunResult:
    L = config.experiment.overhead_L
    bandwidth_hz = config.link.bandwidth_mhz * 1e6
    coherence_s = config.channel.coherence_interval_s
    rows = []
    for mode in Mode:
        report = overhead_report(L, mode)
        rows.append(
            {
                "mode": report.mode,
                "L": report.L,
                "scalars_per_symbol": report.scalars_shared_per_symbol,
                "scalars_per_coherence_interval": report.scalars_shared_per_coherence_interval,
                # symbol rate taken as the bandwidth
                "scalars_per_second": report.scalars_shared_per_symbol * bandwidth_hz
                + report.scalars_shared_per_coherence_interval / coherence_s,
            }
        )
    return RunResult("overhead", pd.DataFrame(rows), {"L": L})
