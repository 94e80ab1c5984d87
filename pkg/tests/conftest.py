import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer

import pytest


class _QuietHandler(SimpleHTTPRequestHandler):
    def log_message(self, *args):
        pass


@pytest.fixture()
def local_uci_mirror(tmp_path_factory):
    """Serve syntactically valid UCI-shaped fixture files over local HTTP."""
    root = tmp_path_factory.mktemp("mirror")
    (root / "haberman").mkdir()
    (root / "parkinsons").mkdir()
    (root / "00519").mkdir()
    (root / "spect").mkdir()
    (root / "haberman" / "haberman.data").write_text("30,64,1,1\n" * 306)
    header = "name," + ",".join(f"f{i}" for i in range(21)) + ",status\n"
    (root / "parkinsons" / "parkinsons.data").write_text(
        header + "".join(f"subj_{i}," + "1.5," * 21 + "1\n" for i in range(195))
    )
    hf_header = ",".join(f"c{i}" for i in range(12)) + ",DEATH_EVENT\n"
    (root / "00519" / "heart_failure_clinical_records_dataset.csv").write_text(
        hf_header + ("1," * 12 + "0\n") * 299
    )
    (root / "spect" / "SPECTF.train").write_text(("1," + "55," * 43 + "55\n") * 80)
    (root / "spect" / "SPECTF.test").write_text(("0," + "60," * 43 + "60\n") * 187)

    handler = partial(_QuietHandler, directory=str(root))
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()
    thread.join()
