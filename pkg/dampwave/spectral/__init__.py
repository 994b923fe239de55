"""Sine-basis spectral calculus and spectral multipliers"""
