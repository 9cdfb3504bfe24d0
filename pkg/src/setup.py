from setuptools import find_packages, setup

setup(
    name="closedloop",
    version="0.1.0",
    author="Jms Dnns",
    author_email="jdennis@gmail.com",
    description="Closed-loop transcription games for learning linear representations of unions of subspaces.",
    packages=find_packages(),
    install_requires=[
        "json_stream",
        "numpy>=1.22",
        "scipy>=1.8",
    ],
    extras_require={
        "dev": ["pytest>=7"],
    },
    classifiers=[
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    entry_points={
        "console_scripts": [
            "closedloop=closedloop.cli:run",
        ],
    },
)
