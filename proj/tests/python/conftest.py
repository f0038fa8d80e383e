import os
import sys

# Under ctest, import the extension staged in the build tree rather than an
# editable install that may be older.
stage = os.environ.get("SWVAR_STAGE")
if stage:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_skbc_swvar")]
    sys.path.insert(0, stage)
    sys.modules.pop("swvar", None)
