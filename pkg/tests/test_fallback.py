import subprocess
import sys

SCRIPT = """
import sys
sys.modules["corrframes._ckernels"] = None  # make the extension unimportable
from corrframes import _backend, catalog, max_correlation
assert _backend.available_backends() == ["python"], _backend.available_backends()
assert _backend.backend_name() == "python"
print(max_correlation(catalog.build("icosahedron6")))
"""


def test_fallback_selected_without_extension():
    out = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, check=True)
    assert abs(float(out.stdout) - 5**-0.5) <= 1e-12
