"""
Run manifests: a flat key=value record written next to every output so a run
can be verified and replayed byte for byte
"""
import hashlib
import shlex
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

from pydantic import BaseModel, Field
from structlog import get_logger

from .. import __version__
from ..errors import CheckFailure, DataError

logger = get_logger()

MANIFEST_SUFFIX = ".manifest"
_CHUNK = 1 << 20

PathLike = Union[str, Path]


class FileDigest(BaseModel):
    path: str
    sha256: str


class RunManifest(BaseModel):
    tool_version: str
    command: str
    argv: List[str]
    workdir: str
    seed: Optional[int] = None
    settings: Dict[str, str] = Field(default_factory=dict)
    inputs: Dict[str, FileDigest] = Field(default_factory=dict)
    outputs: Dict[str, FileDigest] = Field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"tool_version={self.tool_version}", f"command={self.command}",
                 f"argv={shlex.join(self.argv)}", f"workdir={self.workdir}"]
        if self.seed is not None:
            lines.append(f"seed={self.seed}")
        lines += [f"config.{key}={value}" for key, value in self.settings.items()]
        for prefix, files in (("input", self.inputs), ("output", self.outputs)):
            for role, digest in files.items():
                lines.append(f"{prefix}.{role}.path={digest.path}")
                lines.append(f"{prefix}.{role}.sha256={digest.sha256}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunManifest":
        fields: Dict[str, object] = {"settings": {}, "inputs": {}, "outputs": {}}
        files: Dict[str, Dict[str, Dict[str, str]]] = {"input": {}, "output": {}}
        for line_number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DataError(f"manifest line {line_number}: expected key=value")
            if key == "argv":
                fields["argv"] = shlex.split(value)
            elif key.startswith("config."):
                fields["settings"][key[len("config."):]] = value
            elif key.startswith(("input.", "output.")):
                prefix, _, rest = key.partition(".")
                role, _, attribute = rest.rpartition(".")
                files[prefix].setdefault(role, {})[attribute] = value
            else:
                fields[key] = value
        fields["inputs"] = files["input"]
        fields["outputs"] = files["output"]
        try:
            return cls.model_validate(fields)
        except ValueError as e:
            raise DataError(f"invalid manifest: {e}") from None

    def write(self, path: PathLike) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def read(cls, path: PathLike) -> "RunManifest":
        try:
            return cls.from_text(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise DataError(f"cannot read manifest {path}: {e}") from None


def file_digest(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


def manifest_path(output: PathLike) -> Path:
    return Path(str(output) + MANIFEST_SUFFIX)


def _digests(files: Mapping[str, Optional[PathLike]]) -> Dict[str, FileDigest]:
    return {role: FileDigest(path=str(path), sha256=file_digest(path))
            for role, path in files.items() if path is not None}


def record_run(command: str, argv: List[str], workdir: PathLike, settings: Mapping[str, object],
               inputs: Mapping[str, Optional[PathLike]], outputs: Mapping[str, Optional[PathLike]],
               seed: Optional[int] = None) -> RunManifest:
    """Digest inputs and outputs and write the manifest next to the primary output"""
    manifest = RunManifest(tool_version=__version__, command=command, argv=list(argv), workdir=str(workdir),
                           seed=seed, settings={key: str(value) for key, value in settings.items()},
                           inputs=_digests(inputs), outputs=_digests(outputs))
    primary = next(iter(manifest.outputs.values())).path
    manifest.write(manifest_path(primary))
    logger.info("Manifest written", command=command, path=str(manifest_path(primary)))
    return manifest


def _resolve(manifest: RunManifest, path: str) -> Path:
    candidate = Path(path)
    return candidate if candidate.is_absolute() else Path(manifest.workdir) / candidate


def verify_inputs(manifest: RunManifest) -> None:
    for role, digest in manifest.inputs.items():
        path = _resolve(manifest, digest.path)
        if not path.exists():
            raise DataError(f"input {role} missing: {path}")
        if file_digest(path) != digest.sha256:
            raise DataError(f"input {role} changed since the recorded run: {path}")


def verify_outputs(manifest: RunManifest) -> None:
    for role, digest in manifest.outputs.items():
        path = _resolve(manifest, digest.path)
        if not path.exists() or file_digest(path) != digest.sha256:
            raise CheckFailure(f"replayed output {role} differs from the recorded run: {path}")
