from setuptools import find_packages
from setuptools import setup


version = "1.0.0a1.dev0"

setup(
    name="whichpath",
    version=version,
    description="Presence signals and weak values of a particle in multi-path interferometers",
    long_description=(open("README.rst").read() + "\n" + open("CHANGES.rst").read()),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v2 (GPLv2)",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    keywords="interferometer weak value which-path presence",
    license="GPL version 2",
    packages=find_packages(exclude=["examples", "examples.*"]),
    include_package_data=True,
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=[
        "setuptools",
        "numpy",
        "click >= 8.2",
        "zope.interface",
        "zope.component",
        "zope.schema",
        "zope.i18nmessageid",
        "plone.registry >= 1.0b4",
    ],
    extras_require={
        "test": [
            "plone.testing",
            "hypothesis",
            "zope.testrunner",
        ]
    },
    entry_points="""
    [console_scripts]
    whichpath = whichpath.cli:cli
    """,
)
