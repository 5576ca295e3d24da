import setuptools

setuptools.setup(
    name="rebut",
    version="0.1.0",
    description="Recommend rebuttals for misleading vaccine tweets.",
    long_description="Pipeline matching misleading tweets with counter tweets and fact-checked articles via topic models, entities and sentiment",
    license="MIT",
    packages=["rebut", "rebut._provider", "rebut.example"],
    package_data={"rebut": ["data/*"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "scipy",
        "scikit-learn",
        "nltk",
        "gensim>=4.2",
        "vaderSentiment",
        "pyyaml",
        "fastapi",
        "uvicorn",
        "pydantic",
    ],
    extras_require={
        "spacy": ["spacy>=3"],
        "transformer": ["sentence-transformers"],
    },
    entry_points={"console_scripts": ["rebut=rebut.cli:main"],},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Topic :: Text Processing :: Linguistic",
        "Topic :: Software Development :: Libraries",
    ],
)
