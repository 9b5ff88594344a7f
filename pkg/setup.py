from pathlib import Path

import pkg_resources
from setuptools import find_packages, setup

BASE_PATH = Path(__file__).resolve().parent


# read the version from the particular file
with open(BASE_PATH / "btplan" / "version.py", "r") as f:
    exec(f.read())


# read the requirements from requirements.txt
try:
    with open(BASE_PATH / "requirements.txt", "r") as requirements_txt:
        install_requires = [
            str(requirement)
            for requirement in pkg_resources.parse_requirements(requirements_txt)
        ]
except FileNotFoundError:
    # fall-back for conda, where requirements.txt apparently does not work
    print("Cannot find requirements.txt")
    install_requires = [
        "lxml>=4.6.0",
        "numpy>=1.18.0",
        "openai>=1.0.0",
        "pydantic>=2.0.0",
        "PyYAML>=5.3",
    ]


# read the description from the README file
with open(BASE_PATH / "README.md", "r") as fh:
    long_description = fh.read()


setup(
    name="btplan",
    packages=find_packages(exclude=["examples", "examples.*"]),
    package_data={
        "btplan.tasks": [
            "resources/*.yaml",
            "resources/golden/*.xml",
            "resources/mutants/*/*.xml",
        ]
    },
    zip_safe=False,  # the bundled tasks are read from the file system
    version=__version__,
    license="MIT",
    description="Checking, repairing, and validating behavior trees written by "
    "language models",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=["behavior-trees", "robotics", "task-planning", "language-models"],
    python_requires=">=3.8",
    install_requires=install_requires,
    extras_require={"progress": ["tqdm>=4.45"]},
    entry_points={"console_scripts": ["btplan=btplan.cli:main"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
)
