"""System-level simulator for uplink SRS allocation in massive MIMO networks."""
from .engine import CampaignResult, SimConfig, percentile, run_campaign, run_drop

__all__ = ["CampaignResult", "SimConfig", "percentile", "run_campaign", "run_drop"]
