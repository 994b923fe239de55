"""Config files, initial data and output files"""
