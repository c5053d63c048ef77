import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
REPO = os.path.dirname(os.path.dirname(HERE))

ext_dir = os.environ.get("FLOQUETLAB_EXT_DIR")
if ext_dir:
    sys.path.insert(0, ext_dir)
sys.path.insert(0, os.path.join(REPO, "python"))
