"""
GaussFactor - QA (Quality Assurance) moduuli

Sisältää:
- logger.py: OutputRecord ja RunLogger ajojen lokitukseen
- calibration.py: luokittelukynnyksen kalibrointi haamutekijöistä
"""

from .logger import OutputRecord, RunLogger

__all__ = ['OutputRecord', 'RunLogger']
