from satcoop.detection.full_csi import (
    DetectorResult,
    FullCsiInput,
    detect_full,
    minimum_mse_full,
    mmse_full,
    mse_full,
    rate_full,
)
from satcoop.detection.partial_csi import (
    PartialCsiInput,
    build_B_S,
    detect_partial,
    local_normalize,
    mmse_partial,
    mse_partial,
    partial_input_for_cluster,
    rate_partial,
)
from satcoop.detection.symbols import SymbolDecision, bpsk_modulate, detect_symbol, detect_symbols

__all__ = [
    "DetectorResult",
    "FullCsiInput",
    "PartialCsiInput",
    "SymbolDecision",
    "bpsk_modulate",
    "build_B_S",
    "detect_full",
    "detect_partial",
    "detect_symbol",
    "detect_symbols",
    "local_normalize",
    "minimum_mse_full",
    "mmse_full",
    "mmse_partial",
    "mse_full",
    "mse_partial",
    "partial_input_for_cluster",
    "rate_full",
    "rate_partial",
]
