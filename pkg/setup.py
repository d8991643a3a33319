from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="stein-embed",
    version="1.0.0",
    description="Exchangeable-pair normal approximation bounds for embedded statistics",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "click>=8.1",
        "python-decouple>=3.8",
        "python-json-logger>=3.1",
    ],
    entry_points={
        "console_scripts": [
            "stein-embed=stein_embed.cli.main:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
