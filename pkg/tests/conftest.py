import os
import shutil
import subprocess
from pathlib import Path

import pytest

GOLDEN_DIR = Path(__file__).parent / "fixtures" / "golden"

BASE_TIME = 1_700_000_000


class RepoBuilder:
    """Small git repository with deterministic author data and dates."""

    def __init__(self, path: Path):
        self.path = path
        self.commits: list[str] = []
        path.mkdir(parents=True, exist_ok=True)
        self.git("init", "-q")
        self.git("symbolic-ref", "HEAD", "refs/heads/main")

    def git(self, *args: str) -> str:
        command = [
            "git",
            "-C",
            str(self.path),
            "-c",
            "user.name=Fixture",
            "-c",
            "user.email=fixture@example.com",
            "-c",
            "commit.gpgsign=false",
            *args,
        ]
        when = f"{BASE_TIME + len(self.commits) * 60} +0000"
        env = {**os.environ, "GIT_AUTHOR_DATE": when, "GIT_COMMITTER_DATE": when}
        result = subprocess.run(command, capture_output=True, text=True, check=True, env=env)
        return result.stdout.strip()

    def commit(self, files: dict[str, str | None], message: str = "update") -> str:
        """Write (or delete, for ``None``) the given files and commit them; returns the new hash."""
        for rel, content in files.items():
            target = self.path / rel
            if content is None:
                target.unlink()
                continue
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8", newline="\n")
        self.git("add", "-A")
        self.git("commit", "-q", "--allow-empty", "-m", message)
        commit_hash = self.git("rev-parse", "HEAD")
        self.commits.append(commit_hash)
        return commit_hash


def java_class(name: str, loops: int) -> str:
    loop = "        for (int i{k} = 0; i{k} < n; i{k}++) {{\n            total += i{k};\n        }}"
    body = "\n".join(loop.format(k=k) for k in range(loops))
    return (
        f"public class {name} {{\n"
        f"    int run(int n) {{\n"
        f"        int total = 0;\n"
        f"{body}\n"
        f"        return total;\n"
        f"    }}\n"
        f"}}\n"
    )


def write_surefire(directory: Path, suites: dict[str, float]) -> Path:
    """One TEST-<suite>.xml report per suite with the given times."""
    directory.mkdir(parents=True, exist_ok=True)
    for name, seconds in suites.items():
        (directory / f"TEST-{name}.xml").write_text(
            f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<testsuite name="{name}" time="{seconds}" tests="2" errors="0" skipped="0" failures="0">\n'
            f'  <testcase name="first" classname="{name}" time="{seconds / 2}"/>\n'
            f'  <testcase name="second" classname="{name}" time="{seconds / 2}"/>\n'
            f"</testsuite>\n",
            encoding="utf-8",
        )
    return directory


@pytest.fixture
def git_repo(tmp_path: Path) -> RepoBuilder:
    if shutil.which("git") is None:
        pytest.skip("git executable not available")
    return RepoBuilder(tmp_path / "repo")


@pytest.fixture
def java_history(git_repo: RepoBuilder) -> RepoBuilder:
    """Five commits, each adding one Java class with one more loop than the previous one."""
    git_repo.commit({"README.md": "fixture\n", "src/Main.java": java_class("Main", 1)}, "initial")
    for k in range(2, 6):
        git_repo.commit({f"src/Feature{k}.java": java_class(f"Feature{k}", k)}, f"feature {k}")
    return git_repo


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def surefire_writer():
    return write_surefire


@pytest.fixture
def sized_history(git_repo: RepoBuilder) -> RepoBuilder:
    """Five commits over 40 to 44 classes: each commit adds one class and grows an existing one."""
    initial = {f"src/pkg/Service{k}.java": java_class(f"Service{k}", k % 4 + 1) for k in range(40)}
    git_repo.commit(initial, "initial")
    for k in range(40, 44):
        changed = k - 40
        git_repo.commit(
            {
                f"src/pkg/Service{k}.java": java_class(f"Service{k}", k % 4 + 1),
                f"src/pkg/Service{changed}.java": java_class(f"Service{changed}", changed % 4 + 3),
            },
            f"service {k}",
        )
    return git_repo
