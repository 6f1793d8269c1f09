__version__ = '0.3.0'
# master branch version is the one of the previous release.
# version is bumped when a release is done (new branch is created)
