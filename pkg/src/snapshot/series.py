"""
Snapshots of the most recent commits of a repository.

History is walked along first parents from a branch tip; every selected
commit is materialized as a detached checkout inside a private clone, so
the source repository's HEAD and working tree are never touched.
"""

import logging
import shutil
from pathlib import Path
from typing import Optional

from tqdm import tqdm

from common.errors import (
    CheckoutFailed,
    DirtyWorkdir,
    EmptyHistory,
    InvalidArgument,
    NotARepository,
    UnknownBranch,
)
from common.paths import snapshot_dirname

from . import git as gitcmd
from .models import CommitRef, CommitSnapshot
from .utils import count_lines, read_source

logger = logging.getLogger(__name__)


def _check_repository(repo_path: Path) -> Path:
    repo_path = Path(repo_path).resolve()
    if not gitcmd.is_repository(repo_path):
        raise NotARepository(f"{repo_path} is not a git repository")
    return repo_path


def enumerate_commits(repo_path: Path, max_commits: int, branch: Optional[str] = None) -> list[CommitRef]:
    """
    List the ``max_commits`` most recent first-parent commits of ``branch``.

    Args:
        repo_path: Repository to walk.
        max_commits: Upper bound on the number of commits returned.
        branch: Branch name; the checked-out HEAD when omitted.

    Returns:
        list[CommitRef]: Index 0 is the branch tip, increasing indices go back in time.
    """
    if max_commits < 1:
        raise InvalidArgument(f"max_commits must be positive, got {max_commits}")
    repo_path = _check_repository(repo_path)
    if not gitcmd.has_commits(repo_path):
        raise EmptyHistory(f"{repo_path} has no commits")

    rev = branch or "HEAD"
    tip = gitcmd.resolve(repo_path, f"refs/heads/{rev}") if branch else gitcmd.resolve(repo_path, rev)
    if tip is None:
        raise UnknownBranch(f"Unknown branch '{rev}' in {repo_path}")

    entries = gitcmd.first_parent_log(repo_path, tip, max_commits)
    if not entries:
        raise EmptyHistory(f"No commits reachable from '{rev}'")
    commits = [CommitRef(hash=h, index=i, timestamp=ts) for i, (h, ts) in enumerate(entries)]
    logger.info(f"Selected {len(commits)} commits from {rev} ({commits[0].short}..{commits[-1].short})")
    return commits


def _prepare_workdir(repo_path: Path, workdir: Path, force: bool) -> None:
    if workdir.exists() and any(workdir.iterdir()):
        if (workdir / ".git").exists() and gitcmd.is_repository(workdir):
            if force or gitcmd.is_clean(workdir):
                return
            raise DirtyWorkdir(f"{workdir} has local modifications; use --force to discard them")
        if not force:
            raise DirtyWorkdir(f"{workdir} is not empty; use --force to overwrite it")
        logger.warning(f"Removing existing content of {workdir}")
        shutil.rmtree(workdir)

    workdir.parent.mkdir(parents=True, exist_ok=True)
    try:
        gitcmd.git(["clone", "--quiet", "--no-checkout", str(repo_path), str(workdir)], workdir.parent)
    except gitcmd.GitCommandError as e:
        raise CheckoutFailed(str(e), e.returncode) from e


def _checkout(repo_path: Path, commit: CommitRef, workdir: Path, force: bool) -> None:
    try:
        if gitcmd.resolve(workdir, commit.hash) is None:
            gitcmd.git(["fetch", "--quiet", str(repo_path), commit.hash], workdir)
        args = ["checkout", "--quiet", "--detach"]
        if force:
            args.append("--force")
        gitcmd.git([*args, commit.hash], workdir)
        if force:
            gitcmd.git(["clean", "-fdxq"], workdir)
    except gitcmd.GitCommandError as e:
        raise CheckoutFailed(str(e), e.returncode) from e


def materialize_snapshot(
    repo_path: Path, commit: CommitRef, workdir: Path, extension: str = ".java", force: bool = False
) -> CommitSnapshot:
    """
    Materialize the tree of ``commit`` in ``workdir`` and collect its source corpus.

    Args:
        repo_path: Source repository (left untouched).
        commit: Commit to materialize.
        workdir: Target directory; created as a private clone when missing.
        extension: Only files ending with this extension are part of the corpus.
        force: Overwrite a non-empty or modified ``workdir``.

    Returns:
        CommitSnapshot: Tree location, sorted file list and corpus statistics.
    """
    repo_path = _check_repository(repo_path)
    workdir = Path(workdir).resolve()
    _prepare_workdir(repo_path, workdir, force)
    _checkout(repo_path, commit, workdir, force)

    files = sorted(p for p in gitcmd.tree_blobs(workdir, commit.hash) if p.endswith(extension))
    total_loc = 0
    total_chars = 0
    for rel in files:
        text = read_source(workdir / rel)
        total_loc += count_lines(text)
        total_chars += len(text)

    snapshot = CommitSnapshot(
        commit=commit,
        root=workdir,
        extension=extension,
        files=tuple(files),
        total_files=len(files),
        total_loc=total_loc,
        total_chars=total_chars,
    )
    logger.info(f"{commit.label} {commit.short}: {len(files)} files, {total_loc} lines, {total_chars} chars")
    return snapshot


def snapshot_series(
    repo_path: Path,
    max_commits: int,
    workdir: Path,
    extension: str = ".java",
    branch: Optional[str] = None,
    force: bool = False,
) -> list[CommitSnapshot]:
    """
    Materialize the ``max_commits`` most recent commits, one sub-directory each.

    Sub-directories are named ``c_{index}_{shorthash}``. Either every snapshot
    is produced or the directories created by this call are removed.
    """
    commits = enumerate_commits(repo_path, max_commits, branch)
    workdir = Path(workdir).resolve()
    created: list[Path] = []
    snapshots = []
    try:
        for commit in tqdm(commits, desc="Snapshots", unit="commit", disable=None):
            target = workdir / snapshot_dirname(commit.index, commit.hash)
            if not target.exists():
                created.append(target)
            snapshots.append(materialize_snapshot(repo_path, commit, target, extension, force))
    except Exception:
        logger.error(f"Snapshot series aborted, removing {len(created)} partial snapshots")
        for path in created:
            shutil.rmtree(path, ignore_errors=True)
        raise
    return snapshots
