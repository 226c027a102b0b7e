from setuptools import setup

setup(
    name="qwalk_equivalence",
    version='1.0',
    description='Coined and scattering discrete-time quantum walks on the line, square and honeycomb lattices',
    packages=["qwalk_equivalence", "qwalk_equivalence.lattices"],
    install_requires=[
        "joblib",
        "numpy",
        "numba",
        "pandas",
        "scipy",
        "setuptools",
    ],
    entry_points={
        "console_scripts": ["qwalk=qwalk_equivalence.cli:main"],
    },
)
