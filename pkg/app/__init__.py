"""
Analyzer Factory
"""
import logging


def create_analyzer(config_name=None):
    """Create an AnalysisService bound to the named configuration"""
    from app.config.settings import get_config
    from app.services.analysis_service import AnalysisService

    config = get_config(config_name)
    logging.getLogger(__name__).debug(f"🚀 Creating analyzer with {config.__name__}")
    return AnalysisService(config)
