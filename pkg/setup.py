"""
Setup script for ProbeTracker.
"""
from setuptools import setup, find_packages

setup(
    name='probetracker',
    version='0.3.0',
    description='Device re-identification from 802.11 probe requests',
    author='ProbeTracker Team',
    packages=find_packages(include=['probetracker', 'probetracker.*']),
    install_requires=[
        'rich>=12.6.0',
        'numpy>=1.22',
        'matplotlib>=3.5',
    ],
    extras_require={
        'test': ['scapy>=2.5.0'],
    },
    entry_points={
        'console_scripts': [
            'ptrack=probetracker.cli:main',
            'probetracker=probetracker.cli:main'
        ]
    },
    include_package_data=True,
    package_data={
        'probetracker': ['synth/scenarios/*.scenario']
    },
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: System :: Networking :: Monitoring',
        'Intended Audience :: Science/Research'
    ],
    python_requires='>=3.9'
)
