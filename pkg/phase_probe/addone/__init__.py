"""확률 보조정리 몬테카를로 검증 패키지"""
