from setuptools import setup

setup(
    extras_require={
        "test": ["tox", "pytest", "pytest-cov", "hypothesis"],
        "dev": ["pre-commit"],
    }
)
