#
# whichpath documentation build configuration file.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

# -- General configuration -----------------------------------------------------

extensions = []

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

project = "whichpath"
copyright = "2026, the whichpath contributors"

version = "1.0"
release = "1.0.0a1"

exclude_patterns = ["_build"]

pygments_style = "sphinx"

# -- Options for HTML output ---------------------------------------------------

html_theme = "default"

html_static_path = ["_static"]

htmlhelp_basename = "whichpathdoc"

# -- Options for LaTeX output --------------------------------------------------

latex_elements = {
    #'pointsize': '10pt',
}

latex_documents = [
    (
        "index",
        "whichpath.tex",
        "whichpath Documentation",
        "the whichpath contributors",
        "manual",
    ),
]
