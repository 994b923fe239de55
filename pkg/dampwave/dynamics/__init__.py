"""Time integration of the truncated damped wave equation"""
