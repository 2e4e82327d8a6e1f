import logging
import subprocess
from pathlib import Path
from typing import Sequence

logger = logging.getLogger(__name__)


class GitCommandError(RuntimeError):
    def __init__(self, args: Sequence[str], returncode: int, stderr: str):
        super().__init__(f"git {' '.join(args)} exited with {returncode}: {stderr.strip()}")
        self.returncode = returncode
        self.stderr = stderr


def git(git_args: Sequence[str], repo_dir: Path, check: bool = True) -> subprocess.CompletedProcess:
    """Execute a git command with ``git_args`` for the repo located in ``repo_dir``."""
    command = ["git", "-C", str(repo_dir), *git_args]
    logger.debug(f"Running {' '.join(command)}")
    result = subprocess.run(command, capture_output=True, text=True, encoding="utf-8", errors="replace")
    if check and result.returncode != 0:
        raise GitCommandError(git_args, result.returncode, result.stderr)
    return result


def is_repository(path: Path) -> bool:
    if not Path(path).is_dir():
        return False
    return git(["rev-parse", "--git-dir"], path, check=False).returncode == 0


def has_commits(repo_dir: Path) -> bool:
    refs = git(["for-each-ref", "--count=1", "--format=%(refname)", "refs/heads"], repo_dir, check=False)
    return bool(refs.stdout.strip())


def resolve(repo_dir: Path, rev: str) -> str | None:
    result = git(["rev-parse", "--verify", "--quiet", f"{rev}^{{commit}}"], repo_dir, check=False)
    return result.stdout.strip() if result.returncode == 0 else None


def first_parent_log(repo_dir: Path, rev: str, max_count: int) -> list[tuple[str, int]]:
    result = git(["log", "--first-parent", "--format=%H %ct", f"--max-count={max_count}", rev], repo_dir)
    entries = []
    for line in result.stdout.splitlines():
        commit_hash, timestamp = line.split()
        entries.append((commit_hash, int(timestamp)))
    return entries


def tree_blobs(repo_dir: Path, commit_hash: str) -> list[str]:
    """Paths of regular files (no symlinks, no submodules) in the tree of ``commit_hash``."""
    result = git(["ls-tree", "-r", "-z", commit_hash], repo_dir)
    paths = []
    for entry in result.stdout.split("\0"):
        if not entry:
            continue
        meta, path = entry.split("\t", 1)
        mode, kind, _ = meta.split()
        if kind == "blob" and mode != "120000":
            paths.append(path)
    return paths


def is_clean(work_dir: Path) -> bool:
    return not git(["status", "--porcelain"], work_dir).stdout.strip()
