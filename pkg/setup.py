#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name='ponplan',
    version='0.3.0',
    author='ponplan contributors',
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    scripts=['scripts/ponplan'],
    include_package_data=True,
    license='LICENSE',
    description='Registration-aware capacity planning and simulation for TWDM-EPON mobile fronthaul',
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=[
        "numpy >= 1.20",
        "simpy >= 4.0",
        "pyomo >= 6.0",
        "pygraphviz >= 1.3.1",
    ],
    extras_require={
        "tests": ["pytest >= 7.0"],
    },
)
