"""Class numbers, convolution sums and special functions for Hurwitz Correlations"""
