from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# 开发工具只放在 extras 中
_DEV = ("pytest", "pytest-cov", "black", "isort", "mypy")

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.split("#")[0].strip() for line in fh if line.strip() and not line.startswith("#")]
    requirements = [req for req in requirements if req and not req.startswith(_DEV)]

setup(
    name="bm-sync",
    version="1.0.0",
    author="bm-sync Team",
    author_email="bm-sync@example.com",
    description="Burer-Monteiro factorization for Z2 synchronization and community detection",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "pytest-cov>=4.1.0",
            "black>=23.12.1",
            "isort>=5.13.2",
            "mypy>=1.8.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "bm-sync=bmsync.cli:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
