# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
import toml
import re

dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, dir)

# -- Project information -----------------------------------------------------

with open(os.path.join(dir, "pyproject.toml"), "r") as f:
    pyproject = toml.loads(f.read())

project = "qthermo"

authorNameRegex = r"(\w+(?: \w+)*)\s*<[^>]*>"
authors = [re.sub(authorNameRegex, r"\1", author) for author in pyproject["tool"]["poetry"]["authors"]]
author = " & ".join(authors)
copyright = "2021, {}".format(author)

release = pyproject["tool"]["poetry"]["version"]

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.todo",
    "numpydoc",
]

autosummary_generate = True
numpydoc_show_class_members = False

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

# -- Options for HTML output -------------------------------------------------

html_theme = "pydata_sphinx_theme"

autodoc_default_options = {
    "members": None,
    "member-order": "bysource",
}
autodoc_typehints = "description"
