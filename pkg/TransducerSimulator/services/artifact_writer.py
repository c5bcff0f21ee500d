"""
CSV artifacts with a JSON manifest sidecar, written locally or to blob storage.

The CSV starts with one '#' line naming the manifest and its checksum:

    # manifest: eta.csv.manifest.json sha256=<hex>

Floats use 17 significant digits so identical runs give identical bytes.
"""
import hashlib
import io
import json
import logging
import os
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
from azure.storage.blob import BlobServiceClient

from ..models.response_model import RunManifest

BLOB_SCHEME = "blob://"
FLOAT_FORMAT = "%.16e"
MANIFEST_SUFFIX = ".manifest.json"


@dataclass(frozen=True)
class ArtifactPaths:
    csv: str
    manifest: str
    checksum: str


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=_json_default)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def manifest_checksum(manifest: RunManifest) -> str:
    return sha256_text(canonical_json(manifest.core()))


def render_table(frame: pd.DataFrame) -> str:
    with io.StringIO() as output:
        frame.to_csv(output, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return output.getvalue()


def render_artifacts(frame: pd.DataFrame, manifest: RunManifest, csv_name: str) -> Tuple[str, str, str]:
    """
    Build the CSV text and the manifest JSON for one table.

    The table body is hashed into the manifest first; the manifest core is
    then hashed into the CSV header line.

    Returns:
        (csv_text, manifest_text, manifest_checksum)
    """
    body = render_table(frame)
    manifest.artifacts = [{"name": csv_name, "sha256": sha256_text(body), "rows": int(len(frame))}]
    checksum = manifest_checksum(manifest)
    manifest_name = csv_name + MANIFEST_SUFFIX
    csv_text = f"# manifest: {manifest_name} sha256={checksum}\n" + body
    manifest_text = json.dumps({**manifest.to_dict(), "sha256": checksum}, indent=2, sort_keys=True,
                               default=_json_default) + "\n"
    return csv_text, manifest_text, checksum


def parse_blob_url(url: str) -> Tuple[str, str]:
    """Split blob://<container>/<path> into (container, path)."""
    if not url.startswith(BLOB_SCHEME):
        raise ValueError(f"not a blob url: {url}")
    container, _, blob = url[len(BLOB_SCHEME):].partition("/")
    if not container or not blob:
        raise OSError(f"blob url needs a container and a path: {url}")
    return container, blob


def get_blob_service() -> BlobServiceClient:
    connect_str = os.getenv("AzureWebJobsStorage")
    if not connect_str:
        logging.error("Azure storage connection string not found")
        raise OSError("AzureWebJobsStorage is not set; blob output is unavailable")
    return BlobServiceClient.from_connection_string(connect_str)


def _upload(container: str, blob: str, text: str) -> None:
    blob_client = get_blob_service().get_blob_client(container=container, blob=blob)
    blob_client.upload_blob(text, overwrite=True)
    logging.info(f"Uploaded {container}/{blob}")


def write_artifacts(frame: pd.DataFrame, manifest: RunManifest, out: str) -> ArtifactPaths:
    """
    Write <out> and <out>.manifest.json.

    Args:
        frame: Table to store
        manifest: Run manifest; its artifact list is filled in here
        out: Local path or blob://<container>/<path>

    Raises:
        OSError: unwritable path, bad blob url or missing storage connection string
    """
    out = str(out)
    if out.startswith(BLOB_SCHEME):
        container, blob = parse_blob_url(out)
        csv_text, manifest_text, checksum = render_artifacts(frame, manifest, os.path.basename(blob))
        _upload(container, blob, csv_text)
        _upload(container, blob + MANIFEST_SUFFIX, manifest_text)
        return ArtifactPaths(csv=out, manifest=out + MANIFEST_SUFFIX, checksum=checksum)

    csv_text, manifest_text, checksum = render_artifacts(frame, manifest, os.path.basename(out))
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(csv_text)
    with open(out + MANIFEST_SUFFIX, "w", encoding="utf-8", newline="") as handle:
        handle.write(manifest_text)
    logging.info(f"Wrote {out} ({len(frame)} rows), manifest sha256={checksum[:12]}")
    return ArtifactPaths(csv=out, manifest=out + MANIFEST_SUFFIX, checksum=checksum)


def verify_artifact(path: str) -> bool:
    """
    Check a local CSV against its manifest: header checksum, manifest core
    checksum and table body checksum must all agree.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        header = handle.readline()
        body = handle.read()
    if not header.startswith("# manifest: "):
        return False
    manifest_name, _, checksum = header[len("# manifest: "):].strip().partition(" sha256=")
    manifest_path = os.path.join(os.path.dirname(path), manifest_name)
    with open(manifest_path, "r", encoding="utf-8") as handle:
        data = json.load(handle)

    core = {key: data[key] for key in ("command", "config", "derived", "grid", "artifacts")}
    if sha256_text(canonical_json(core)) != checksum or data.get("sha256") != checksum:
        return False
    return any(entry["sha256"] == sha256_text(body) for entry in data["artifacts"])
