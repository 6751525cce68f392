"""Discrete-event model of the 802.11ah MAC at segment granularity."""

from .dcf import DcfParams, ExchangeOutcome, OutcomeKind, SegmentResult, dcf_params, run_dcf_segment
from .engine import Simulation, Station, simulate
from .schedule import Owner, ScheduleEntry, SegmentSchedule, SlotKind, build_schedule
from .stations import Aid, assign_stations, generate_traffic

__all__ = [
    "Aid", "DcfParams", "ExchangeOutcome", "OutcomeKind", "Owner", "ScheduleEntry",
    "SegmentResult", "SegmentSchedule", "Simulation", "SlotKind", "Station",
    "assign_stations", "build_schedule", "dcf_params", "generate_traffic",
    "run_dcf_segment", "simulate",
]
