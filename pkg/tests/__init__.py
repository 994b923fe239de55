"""dampwave tests"""
