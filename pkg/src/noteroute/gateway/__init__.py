from noteroute.gateway.config import ServiceConfig, load_config
from noteroute.gateway.jobs import Job, JobRunner, UnknownJob
from noteroute.gateway.service import GatewayState, create_app, initial_model

__all__ = [
    "GatewayState",
    "Job",
    "JobRunner",
    "ServiceConfig",
    "UnknownJob",
    "create_app",
    "initial_model",
    "load_config",
]
