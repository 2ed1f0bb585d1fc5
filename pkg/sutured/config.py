import os

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Config:
    SECRET_KEY = os.environ.get('SECRET_KEY', '__CHANGE_ME__')
    SUTURED_DEFAULT_RING = os.environ.get('SUTURED_DEFAULT_RING', 'f2')
    SUTURED_SEED = int(os.environ.get('SUTURED_SEED', 0))
    SUTURED_MAX_N = int(os.environ.get('SUTURED_MAX_N', 5))
    SUTURED_CORPUS_SIZE = int(os.environ.get('SUTURED_CORPUS_SIZE', 200))
    SUTURED_LOG_LEVEL = os.environ.get('SUTURED_LOG_LEVEL', 'WARNING')


class TestConfig(Config):
    TESTING = True
    SUTURED_MAX_N = 4
    SUTURED_CORPUS_SIZE = 20
