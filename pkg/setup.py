from setuptools import setup, find_packages

setup(
    name="NRUrnPy",
    version="1.0.0",
    description="Simulation and stochastic approximation analysis of negatively reinforced urn schemes",
    license="AGPLv3",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=['msgpack', 'numpy', 'scipy', 'pandas'],
    extras_require={'test': ['pytest']},
    python_requires=">=3.6",
    scripts=['nrurn.py']
)
