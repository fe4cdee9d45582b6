"""Download helper for the published Etruscan-English dataset.

Everything else in the package works offline on local files; this is the
one convenience that talks to the network. The archive of the public dataset
repository is downloaded into a cache directory (``ETTMT_DATA_DIR``, or
``~/.cache/ettmt``) and extracted there. Corpus files must still be
converted to the TSV/JSON layout this package reads; see the README.
"""

from __future__ import annotations

import os
import tarfile
import urllib.request
from pathlib import Path

DEFAULT_URL = "https://github.com/GianlucaVico/Larth-Etruscan-NLP/archive/refs/heads/main.tar.gz"
DATA_DIR_ENV = "ETTMT_DATA_DIR"
URL_ENV = "ETTMT_DATASET_URL"


def data_dir() -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "ettmt"


def fetch_dataset(dest: str | os.PathLike | None = None, url: str | None = None) -> Path:
    """Download and extract the dataset archive; returns the extraction root.

    Skips the download when the archive is already in the cache.
    """
    url = url or os.environ.get(URL_ENV) or DEFAULT_URL
    root = Path(dest) if dest else data_dir()
    root.mkdir(parents=True, exist_ok=True)
    archive = root / "dataset.tar.gz"
    if not archive.exists():
        with urllib.request.urlopen(url, timeout=60) as response, open(archive, "wb") as out:
            while True:
                chunk = response.read(1 << 20)
                if not chunk:
                    break
                out.write(chunk)
    extracted = root / "extracted"
    if not extracted.exists():
        extracted.mkdir()
        with tarfile.open(archive, "r:gz") as tar:
            tar.extractall(extracted)
    return extracted
