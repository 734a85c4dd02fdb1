# Sphinx configuration for the python-macgyver documentation

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

project = u'Python MacGyver Tool Construction'
copyright = u'2019, Phil Birkelbach'
author = u'Phil Birkelbach'
version = u'0.1.0'
release = u'0.1.0'

extensions = [
    'sphinx.ext.autodoc',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = [u'_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

html_theme = 'alabaster'
html_static_path = ['_static']
htmlhelp_basename = 'PythonMacGyverdoc'

latex_documents = [
    (master_doc, 'PythonMacGyver.tex', u'Python MacGyver Documentation',
     u'Phil Birkelbach', 'manual'),
]

man_pages = [
    (master_doc, 'macgyver', u'Python MacGyver Documentation', [author], 1)
]
