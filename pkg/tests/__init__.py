"""
Test suite for qva-transfer.
"""
