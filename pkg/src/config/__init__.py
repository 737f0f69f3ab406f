from .settings import ConfigManager, RunConfig, worker_count

__all__ = ['ConfigManager', 'RunConfig', 'worker_count']
