import os
from dotenv import load_dotenv

load_dotenv()

# Exhaustive checks refuse to enumerate more free nets than this
ENUMERATION_CAP = int(os.getenv("REVSEQ_ENUMERATION_CAP", "20"))

# Width used for parameterised cells when none is given
DEFAULT_WIDTH = int(os.getenv("REVSEQ_DEFAULT_WIDTH", "4"))

LOG_LEVEL = os.getenv("REVSEQ_LOG_LEVEL", "INFO")
LOG_DIR = os.getenv("REVSEQ_LOG_DIR", "")

REPORTS_DIR = os.getenv("REVSEQ_REPORTS_DIR", "reports")
