# mypy: ignore-errors

import nox

ALL_PYTHON_VS = ["3.10", "3.11", "3.12"]


@nox.session(python=ALL_PYTHON_VS)
def test(session):
    session.install(".[test]")
    session.run("pytest", "-n", "auto", *session.posargs)


@nox.session(python=["3.12"])
def smoke(session):
    """Run the synthetic pipeline through the command line, then the slow tests"""
    session.install(".")
    tmp = session.create_tmp()
    session.run("kinemark", "synth", "--out", f"{tmp}/corpus", "--participants", "20")
    session.run(
        "kinemark",
        "run",
        "--corpus",
        f"{tmp}/corpus/manifest.csv",
        "--setting",
        "s4",
        "--reps",
        "10",
        "--out",
        f"{tmp}/results",
    )
    session.run("kinemark", "report", "--out", f"{tmp}/results", "--format", "text")
    session.install(".[test]")
    session.run("pytest", "-m", "slow", "tests/harness")


@nox.session
def docs(session):
    session.install(".[docs]")
    with session.chdir("docs"):
        session.run(
            "python",
            "-m",
            "sphinx",
            "-T",
            "-E",
            "-W",
            "--keep-going",
            "-b",
            "dirhtml",
            "-d",
            "_build/doctrees",
            "-D",
            "language=en",
            ".",
            "_build/dirhtml",
        )
