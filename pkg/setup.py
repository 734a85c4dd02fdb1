from setuptools import setup, find_packages

setup(
    name='python-macgyver',
    version='0.1.0',
    long_description=open('README.rst').read(),
    description="Tool construction from available parts by superquadric geometric reasoning",
    author="Phil Birkelbach",
    author_email="phil@petrasoft.net",
    license='GNU General Public License Version 2',
    url='https://github.com/birkelbach/python-macgyver',
    packages=find_packages(exclude=['tests']),
    package_data = {'macgyver':['presets.json', 'schemas.json']},
    install_requires = ['numpy', 'scipy', 'jsonschema', 'plyfile'],
    entry_points = {'console_scripts': ['macgyver = macgyver.cli:main']},
    test_suite = 'tests',
)
