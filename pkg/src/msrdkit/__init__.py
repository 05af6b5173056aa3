"""Doubly and triply extended MSRD codes over finite field towers."""
