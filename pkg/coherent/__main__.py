"""python -m coherent
"""
from coherent.cli import main

if __name__ == "__main__":
    main(prog_name="coherent")
