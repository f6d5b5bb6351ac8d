# DuVal Toolkit Package
# Exact polynomial, blow-up, classification and intersection routines for D5 contractions
