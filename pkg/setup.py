import os
from setuptools import setup, find_packages

exec(open('xigeo/version.py').read())

def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname), encoding='utf8').read()

setup(
    name='xigeo',
    version=__version__,
    install_requires=[
        'numpy',
        'scipy',
        'pandas>=1.5',
    ],
    extras_require={
        'docs': [
            'sphinx',
            'sphinx-autobuild',
            'sphinx_rtd_theme',
        ],
        'test': [
            'mock',
            'pytest',
        ],
    },
    entry_points={
        'console_scripts': ['xigeo = xigeo.cli:main'],
    },
    description='Numerical lab for Lagrangian tori and xi-surfaces in C^2: spectral geometry, identity checks and '
                'lambda-curve shooting.',
    license='Apache License 2.0',
    keywords='Lagrangian surfaces, self-shrinkers, spectral differentiation, differential geometry',
    packages=find_packages(exclude=['tests']),
    long_description=read('README.rst'),
    python_requires='>=3.8',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3',
    ]
)
