"""경험적/모집단 손실 지형 패키지"""
