"""헤시안 극값 고유값 추정 패키지"""
