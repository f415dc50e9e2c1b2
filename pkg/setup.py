from setuptools import setup, find_packages

setup(
    name="spt-index",
    version="1.0.0",
    description="Exact H^3(G, U(1)) index of 2d bosonic SPT states from boundary restriction",
    packages=find_packages(exclude=["tests", "examples"]),
    install_requires=[
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.24",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "spt-index=src.spt_index:main",
        ],
    },
)
