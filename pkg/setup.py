from setuptools import setup, find_packages

setup(
    name='lle-bifurcation',
    version='0.0.1',
    description='Bifurcation analysis of the stationary Lugiato-Lefever equation',
    packages=find_packages(include=['lleb', 'lleb.*']),
    py_modules=['main'],
    install_requires=[
        'numpy',
        'scipy',
        'omegaconf',
        'tqdm',
        'matplotlib',
    ],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['lleb = main:main']},
)
