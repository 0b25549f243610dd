"""Hurwitz Correlations package initialization"""
