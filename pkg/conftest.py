import os
import sys

# Packages are flat at the repository root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
